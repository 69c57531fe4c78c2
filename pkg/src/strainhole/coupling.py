"""Dispersive interaction energy between the probe and the hole-burnt ensemble.

V(X) is the AC Stark shift summed over every ion outside the hole. Three
routes are provided and cross-checked against each other:

``numeric``
    Quadrature over the crystal thickness of the exact detuning integral.
    Per height the two improper integrals of 1/delta from the far wings to
    the hole edges diverge separately, but their sum is ln(|left|/right),
    which is what gets integrated.
``closed``
    The same integral after expanding 1/delta to first order in the bending
    shift k*x*X (exact derivative at X = 0).
``lowT``
    The closed form further expanded to third order in g*gradB*e/(6*delta)
    with no Brownian smear.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from scipy import integrate
from scipy.constants import c as C_LIGHT

from .errors import (EdgeTouchesCarrier, GradientSmearDegenerate, LogDomain,
                     QuadratureFailure, ZeroDetuning)
from .holeburn import BurnSpec, _raw_edges
from .model import MechanicsDerived, ProbeSpec

__all__ = [
    "ProbeSpec", "Method", "CouplingResult", "cross_section_sigma0", "per_ion_phase",
    "per_ion_stark", "V_numeric", "V_closed", "V_lowT", "V", "dVdX0",
    "static_displacement", "carrier_phase", "couple",
]

QUAD_EPSREL = 1e-10
QUAD_LIMIT = 200
# Finite-difference step for the numeric derivative, as k*(e/2)*h / delta.
FD_REL_STEP = 1e-4
# |g gradB - k X_burn| below this fraction of g gradB counts as degenerate.
DEGENERACY_RTOL = 1e-6
# Warn when 2*pi*|delta| is less than this multiple of Gamma.
DISPERSIVE_MARGIN = 10.0


class Method(str, enum.Enum):
    NUMERIC = "numeric"
    CLOSED = "closed"
    LOWT = "lowT"

    @classmethod
    def parse(cls, name) -> "Method":
        if isinstance(name, cls):
            return name
        for m in cls:
            if m.value.lower() == str(name).lower():
                return m
        raise ValueError(f"unknown method {name!r}")


@dataclass(frozen=True)
class CouplingResult:
    V: float
    dVdX0: float
    X_disp: float
    carrier_phase: float
    method: Method
    X: float

    def as_dict(self) -> dict:
        return {
            "V_J": self.V,
            "dVdX0_J_per_m": self.dVdX0,
            "X_disp_m": self.X_disp,
            "X_eval_m": self.X,
            "carrier_phase_rad": self.carrier_phase,
            "method": self.method.value,
        }


def cross_section_sigma0(wavelength: float, gamma: float) -> float:
    """sigma_0 = lambda^3 Gamma / (16 pi^2 c), so that V_i = sigma_0 I / delta_i."""
    return wavelength**3 * gamma / (16 * math.pi**2 * C_LIGHT)


def _check_detuning(delta: float, gamma: float):
    if delta == 0:
        raise ZeroDetuning("probe is resonant with the ion (detuning 0)")
    if 2 * math.pi * abs(delta) < DISPERSIVE_MARGIN * gamma:
        warnings.warn(f"detuning {delta:g} Hz is not large compared to the linewidth; "
                      "the dispersive approximation is poor", RuntimeWarning, stacklevel=3)


def per_ion_phase(delta: float, probe: ProbeSpec, gamma: float) -> float:
    """Probe phase shift (rad) from one ion detuned by ``delta`` Hz."""
    _check_detuning(delta, gamma)
    return -(probe.wavelength**2 * gamma) / (8 * math.pi * probe.cross_section) / delta


def per_ion_stark(delta: float, probe: ProbeSpec, gamma: float) -> float:
    """AC Stark shift (J) of one ion detuned by ``delta`` Hz."""
    _check_detuning(delta, gamma)
    return cross_section_sigma0(probe.wavelength, gamma) * probe.intensity / delta


def _prefactor(n: float, probe: ProbeSpec, gamma: float) -> float:
    return n * cross_section_sigma0(probe.wavelength, gamma) * probe.intensity


def _log_ratio_integrand(b: BurnSpec, X: float, cutoff: float | None):
    k = b.strain_k

    def f(x):
        left, right = _raw_edges(x, b)
        shift = k * x * X
        left, right = left + shift, right + shift
        # log difference (not log of the ratio) keeps f(-x) = -f(x) bit-exact
        # for mirror-symmetric holes, so symmetric cases integrate to 0.
        val = math.log(-left) - math.log(right)
        if cutoff is not None:
            # Wings truncated at +-cutoff in the unbent frame move with the ions.
            val += math.log(cutoff + shift) - math.log(cutoff - shift)
        return val

    return f


def _check_carrier_clear(b: BurnSpec, X: float):
    # Edges are piecewise linear in x with a kink at 0: the extremes are at
    # the faces or the centre.
    for x in (-b.thickness / 2, 0.0, b.thickness / 2):
        left, right = _raw_edges(x, b)
        shift = b.strain_k * x * X
        if left + shift >= 0 or right + shift <= 0:
            raise EdgeTouchesCarrier(f"at X = {X:g} m a hole edge reaches the probe frequency (x = {x:g} m)")


def V_numeric(X: float, b: BurnSpec, n: float, probe: ProbeSpec, gamma: float,
              cutoff: float | None = None, epsrel: float = QUAD_EPSREL) -> float:
    """Interaction energy (J) by adaptive quadrature over the thickness.

    Args:
        X: Tip displacement (m).
        b: Burn parameters.
        n: Ions per Hz per metre of height.
        probe: Probe beam.
        gamma: Linewidth (rad/s).
        cutoff: Optional half-width (Hz) of the inhomogeneous line; ``None``
            integrates the wings to infinity.
        epsrel: Relative quadrature tolerance.
    """
    _check_carrier_clear(b, X)
    if cutoff is not None:
        reach = 3 * b.half_width + (abs(b.zeeman_slope) + b.smear_slope) * b.thickness / 2
        if cutoff <= reach + b.strain_k * b.thickness / 2 * abs(X):
            raise ValueError("cutoff must lie beyond the hole edges")
    f = _log_ratio_integrand(b, X, cutoff)
    h = b.thickness / 2
    total = 0.0
    for lo, hi in ((-h, 0.0), (0.0, h)):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=epsrel, limit=QUAD_LIMIT)
            except integrate.IntegrationWarning as exc:
                raise QuadratureFailure(str(exc)) from exc
        total += val
    return _prefactor(n, probe, gamma) * total


def _closed_bracket(b: BurnSpec, degenerate: str = "raise") -> float:
    """dV/dX at X = 0 in units of 2 k n sigma_0 I (m per Hz/m).

    Odd in the Zeeman slope, so it is evaluated for |g gradB| and the sign
    restored afterwards.
    """
    G, K, e, d = b.zeeman_slope, b.smear_slope, b.thickness, b.half_width
    if G == 0:
        return 0.0
    sign = math.copysign(1.0, G)
    G = abs(G)
    q = e / (6 * d)
    plus, minus = G + K, K - G
    if 1 + minus * q <= 0:
        raise LogDomain("logarithm argument of the closed form is not positive")
    if abs(minus) < DEGENERACY_RTOL * G:
        if degenerate != "limit":
            raise GradientSmearDegenerate(
                "g*gradB equals k*X_burn; the closed form is 0/0 (pass degenerate='limit')")
        # K -> G limit: the 1/(G-K) poles of the first and third terms cancel
        return sign * (e / (4 * G) - e**2 / (24 * d)
                       - 3 * d / (4 * G**2) * math.log1p(G * e / (3 * d)))
    return sign * (G * e / (G**2 - K**2)
                   - 3 * d / plus**2 * math.log1p(plus * q)
                   + 3 * d / minus**2 * math.log1p(minus * q))


def V_closed(X: float, b: BurnSpec, n: float, probe: ProbeSpec, gamma: float,
             degenerate: str = "raise") -> float:
    """First-order-in-bending closed form; exactly linear in X."""
    return 2 * b.strain_k * X * _prefactor(n, probe, gamma) * _closed_bracket(b, degenerate)


def V_lowT(X: float, b: BurnSpec, n: float, probe: ProbeSpec, gamma: float) -> float:
    """Leading small-gradient term, Brownian smear neglected."""
    G, e, d = b.zeeman_slope, b.thickness, b.half_width
    return -b.strain_k * X * _prefactor(n, probe, gamma) * G * e**3 / (54 * d**2)


def V(X: float, b: BurnSpec, n: float, probe: ProbeSpec, gamma: float,
      method: Method | str = Method.NUMERIC, **kw) -> float:
    method = Method.parse(method)
    if method is Method.NUMERIC:
        return V_numeric(X, b, n, probe, gamma, **kw)
    if method is Method.CLOSED:
        return V_closed(X, b, n, probe, gamma, **kw)
    return V_lowT(X, b, n, probe, gamma)


def fd_step(b: BurnSpec, rel_step: float = FD_REL_STEP) -> float:
    """Displacement step for which the largest bending shift is rel_step*delta."""
    if b.strain_k == 0:
        return 1e-12
    return rel_step * b.half_width / (b.strain_k * b.thickness / 2)


def dVdX0(b: BurnSpec, n: float, probe: ProbeSpec, gamma: float,
          method: Method | str = Method.NUMERIC, step: float | None = None, **kw) -> float:
    """Slope of V at the undisplaced position (J/m).

    Closed and low-temperature forms are linear in X, so their slope is
    exact. The numeric route uses a central difference of the quadrature.
    """
    method = Method.parse(method)
    if method is Method.CLOSED:
        return V_closed(1.0, b, n, probe, gamma, **kw)
    if method is Method.LOWT:
        return V_lowT(1.0, b, n, probe, gamma)
    h = fd_step(b) if step is None else step
    return (V_numeric(h, b, n, probe, gamma, **kw) - V_numeric(-h, b, n, probe, gamma, **kw)) / (2 * h)


def static_displacement(dvdx0: float, mech: MechanicsDerived) -> float:
    """Shift of the equilibrium tip position under the dispersive force."""
    return -dvdx0 / mech.spring_constant


def carrier_phase(energy: float, probe: ProbeSpec) -> float:
    """Total probe phase shift for interaction energy ``energy``."""
    return energy * probe.angular_frequency / (probe.intensity * probe.cross_section)


def couple(b: BurnSpec, n: float, probe: ProbeSpec, gamma: float, mech: MechanicsDerived,
           method: Method | str = Method.NUMERIC, X: float | None = None, **kw) -> CouplingResult:
    """Run the coupling chain for one method.

    V and the carrier phase are evaluated at ``X`` which defaults to the
    self-consistent static displacement.
    """
    method = Method.parse(method)
    slope = dVdX0(b, n, probe, gamma, method, **kw)
    x_disp = static_displacement(slope, mech)
    x_eval = x_disp if X is None else X
    energy = V(x_eval, b, n, probe, gamma, method, **kw)
    return CouplingResult(
        V=energy,
        dVdX0=slope,
        X_disp=x_disp,
        carrier_phase=carrier_phase(energy, probe),
        method=method,
        X=x_eval,
    )
