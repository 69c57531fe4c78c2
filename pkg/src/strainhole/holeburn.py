"""Two-step functionalized hole burning and the resulting hole edges.

The hole is burnt twice with opposite magnetic gradients, each scan covering
a window of width 4*delta offset to one side of the centre. After the
gradient is switched off the union of the two burnt regions is a hole whose
edges tilt linearly with the ion height x. Brownian motion of the
cantilever during the burn widens each edge by k|x| X_burn.

Detunings returned here are relative to the hole centre ``center_frequency``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EdgeCrossing, EdgeTouchesCarrier, ValidationError
from .model import CantileverSpec, IonEnsembleSpec, strain_coupling_k

# Slack on the step-1 overlap condition so that an exactly matched gradient
# is not rejected by rounding.
MATCH_RTOL = 1e-12


@dataclass(frozen=True)
class BurnSpec:
    """Parameters of the burn.

    Attributes:
        half_width: delta (Hz); the final hole is about 6*delta wide.
        bias_gradient: Magnetic gradient applied during step 1 (T/m).
        smear_amplitude: Brownian amplitude of the tip during the burn (m).
        zeeman_sensitivity: g (Hz/T).
        strain_k: Strain coupling k (Hz/m^2).
        thickness: Cantilever thickness e (m).
        center_frequency: Origin of all detunings (Hz).
    """

    half_width: float
    bias_gradient: float
    smear_amplitude: float
    zeeman_sensitivity: float
    strain_k: float
    thickness: float
    center_frequency: float = 0.0

    def __post_init__(self):
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise ValidationError(f"BurnSpec.half_width must be > 0, got {self.half_width!r}")
        if not (self.thickness > 0):
            raise ValidationError("BurnSpec.thickness must be > 0")
        if not (self.smear_amplitude >= 0):
            raise ValidationError("BurnSpec.smear_amplitude must be >= 0")
        if self.strain_k < 0 or self.zeeman_sensitivity < 0:
            raise ValidationError("BurnSpec strain_k and zeeman_sensitivity must be >= 0")
        if self.zeeman_shift_at_face > self.half_width * (1 + MATCH_RTOL):
            raise ValidationError(
                f"the two burn windows do not overlap: g*(e/2)*|grad B| = {self.zeeman_shift_at_face:g} Hz"
                f" exceeds half_width {self.half_width:g} Hz")
        # Edges are linear in x on each side of 0, so the faces are the worst case.
        for x in (-self.thickness / 2, self.thickness / 2):
            left, right = _raw_edges(x, self)
            if left >= right:
                raise ValidationError(f"hole collapses at x = {x:g} m (edges {left:g}, {right:g} Hz)")

    @classmethod
    def from_specs(cls, cantilever: CantileverSpec, ions: IonEnsembleSpec, half_width: float,
                   bias_gradient: float, smear_amplitude: float = 0.0,
                   center_frequency: float = 0.0) -> "BurnSpec":
        return cls(
            half_width=half_width,
            bias_gradient=bias_gradient,
            smear_amplitude=smear_amplitude,
            zeeman_sensitivity=ions.zeeman_sensitivity,
            strain_k=strain_coupling_k(cantilever, ions),
            thickness=cantilever.thickness,
            center_frequency=center_frequency,
        )

    @property
    def zeeman_slope(self) -> float:
        """g * grad B, the Zeeman tilt of the edges (Hz/m)."""
        return self.zeeman_sensitivity * self.bias_gradient

    @property
    def smear_slope(self) -> float:
        """k * X_burn, the Brownian widening per unit height (Hz/m)."""
        return self.strain_k * self.smear_amplitude

    @property
    def zeeman_shift_at_face(self) -> float:
        return abs(self.zeeman_slope) * self.thickness / 2

    def matching_residual(self) -> dict:
        """How far the gradient is from the maximum-coupling choice.

        Two forms of the matching condition are in circulation, one using the
        face height e/2 and one the full thickness e; both ratios are
        reported so neither is silently preferred.
        """
        return {
            "g_gradB_half_thickness_over_delta": self.zeeman_shift_at_face / self.half_width,
            "g_gradB_thickness_over_delta": 2 * self.zeeman_shift_at_face / self.half_width,
        }


@dataclass(frozen=True)
class BurnStep:
    gradient: float
    scan_interval: tuple[float, float]


@dataclass(frozen=True)
class HoleProfile:
    x: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def rows(self):
        return zip(self.x.tolist(), self.left.tolist(), self.right.tolist())


def burn_schedule(b: BurnSpec) -> list[BurnStep]:
    nu0, d = b.center_frequency, b.half_width
    return [
        BurnStep(b.bias_gradient, (nu0 - d, nu0 + 3 * d)),
        BurnStep(-b.bias_gradient, (nu0 - 3 * d, nu0 + d)),
    ]


def _raw_edges(x, b: BurnSpec):
    d = b.half_width
    tilt = b.zeeman_slope * x
    smear = b.smear_slope * np.abs(x)
    return -3 * d + tilt - smear, 3 * d - tilt + smear


def _check_height(x, b: BurnSpec):
    h = b.thickness / 2 * (1 + MATCH_RTOL)
    if np.any(np.abs(x) > h):
        raise ValueError(f"height outside the crystal: |x| must be <= {b.thickness / 2:g} m")


def hole_edges(x: float, b: BurnSpec) -> tuple[float, float]:
    """Left and right hole edges (Hz, relative to the centre) at height x."""
    _check_height(x, b)
    left, right = _raw_edges(x, b)
    if left >= right:
        raise EdgeCrossing(f"hole edges cross at x = {x:g} m")
    return float(left), float(right)


def is_dark(x: float, detuning: float, b: BurnSpec) -> bool:
    """Whether an ion at height ``x`` with intrinsic detuning ``detuning`` was burnt.

    Evaluated step by step: during a step with gradient G the ion sits at
    ``detuning + g*G*x`` and is burnt if that lies in the scanned window
    widened by the Brownian excursion k|x|X_burn.
    """
    hole_edges(x, b)
    smear = b.smear_slope * abs(x)
    for step in burn_schedule(b):
        lo, hi = (f - b.center_frequency for f in step.scan_interval)
        shifted = detuning + b.zeeman_sensitivity * step.gradient * x
        if lo - smear <= shifted <= hi + smear:
            return True
    return False


def hole_profile(b: BurnSpec, X: float, n_samples: int = 101) -> HoleProfile:
    """Hole edges across the thickness with the cantilever bent by ``X``."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    x = np.linspace(-b.thickness / 2, b.thickness / 2, n_samples)
    left, right = _raw_edges(x, b)
    if np.any(left >= right):
        raise EdgeCrossing("hole edges cross inside the crystal")
    shift = b.strain_k * x * X
    left, right = left + shift, right + shift
    if np.any(left >= 0) or np.any(right <= 0):
        raise EdgeTouchesCarrier(f"bending X = {X:g} m moves a hole edge through the probe frequency")
    return HoleProfile(x, left, right)
