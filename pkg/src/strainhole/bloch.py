"""Weakly driven two-level coherence under a sinusoidally modulated detuning.

Everything in this module is in rad/s. The coherence obeys

    d rho/dt = (i delta(t) - Gamma/2) rho + i Omega/2,
    delta(t) = delta + eps cos(omega_M t),

with the ground-state population frozen at 1. To first order in eps the
periodic steady state is a0 + a+ exp(i w t) + a- exp(-i w t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergent, ValidationError

PASS_THRESHOLD = 0.1
WARN_THRESHOLD = 0.5
# Periodicity residual, relative to |a0|, accepted by integrate_bloch.
PERIODIC_RTOL = 1e-8


@dataclass(frozen=True)
class TwoLevelDrive:
    """Drive parameters.

    Attributes:
        rabi: Omega (rad/s).
        detuning: delta_r (rad/s), non-zero.
        decay: Gamma (rad/s), > 0.
        modulation: eps, amplitude of the detuning modulation (rad/s).
        mech_frequency: omega_M (rad/s).
    """

    rabi: float
    detuning: float
    decay: float
    modulation: float = 0.0
    mech_frequency: float = 1.0

    def __post_init__(self):
        if not self.decay > 0:
            raise ValidationError("TwoLevelDrive.decay must be > 0")
        if self.detuning == 0:
            raise ValidationError("TwoLevelDrive.detuning must be non-zero")
        if not self.mech_frequency > 0:
            raise ValidationError("TwoLevelDrive.mech_frequency must be > 0")

    @property
    def complex_detuning(self) -> complex:
        return complex(self.detuning, self.decay / 2)

    @property
    def weak_excitation(self) -> bool:
        return abs(self.rabi / self.detuning) < PASS_THRESHOLD

    @property
    def period(self) -> float:
        return 2 * math.pi / self.mech_frequency

    def detuning_at(self, t):
        return self.detuning + self.modulation * np.cos(self.mech_frequency * t)


@dataclass(frozen=True)
class PssCoefficients:
    a0: complex
    a_plus: complex
    a_minus: complex


def steady_state_coherence(d: TwoLevelDrive) -> complex:
    return (0.5j * d.rabi) / (d.decay / 2 - 1j * d.detuning)


def far_detuned_coherence(d: TwoLevelDrive) -> tuple[float, float]:
    """Large-detuning approximation -Omega/(2 delta) and its relative error."""
    approx = -d.rabi / (2 * d.detuning)
    exact = steady_state_coherence(d)
    err = abs(approx - exact) / abs(exact) if exact != 0 else 0.0
    return approx, err


def _a0(d: TwoLevelDrive, form: str) -> complex:
    if form == "approx":
        return complex(-d.rabi / (2 * d.detuning))
    if form == "exact":
        # identical to steady_state_coherence
        return -d.rabi / (2 * d.complex_detuning)
    raise ValueError(f"unknown a0 form {form!r}")


def pss_coefficients(d: TwoLevelDrive, a0_form: str = "approx") -> PssCoefficients:
    """First-order-in-eps periodic steady state.

    ``a0_form="approx"`` uses -Omega/(2 delta_r) for the static part;
    ``"exact"`` keeps the decay, -Omega/(2 (delta_r + i Gamma/2)).
    """
    a0 = _a0(d, a0_form)
    dbar = d.complex_detuning
    w = d.mech_frequency
    half = d.modulation / 2
    return PssCoefficients(a0, half / (w - dbar) * a0, -half / (w + dbar) * a0)


def pss_coherence(t, d: TwoLevelDrive, a0_form: str = "approx"):
    """Periodic steady-state coherence at time(s) ``t``.

    Collected form of the three-term Ansatz:
    a0 [1 + (eps dbar cos wt + i eps w sin wt) / (w^2 - dbar^2)].
    """
    a0 = _a0(d, a0_form)
    dbar = d.complex_detuning
    w = d.mech_frequency
    t = np.asarray(t, dtype=float)
    denom = w**2 - dbar**2
    wt = w * t
    out = np.asarray(a0 * (1 + d.modulation * (dbar * np.cos(wt) + 1j * w * np.sin(wt)) / denom),
                     dtype=complex)
    return out if out.ndim else complex(out)


def adiabatic_coherence(t, d: TwoLevelDrive):
    """Instantaneous far-detuned steady state, -Omega / (2 delta(t))."""
    out = -d.rabi / (2 * d.detuning_at(np.asarray(t, dtype=float)))
    out = np.asarray(out, dtype=complex)
    return out if out.ndim else complex(out)


def rk4(f, y0, t0: float, dt: float, n_steps: int):
    """Classic fixed-step fourth-order Runge-Kutta.

    Times are formed as t0 + i*dt rather than accumulated.
    """
    ts = t0 + dt * np.arange(n_steps + 1)
    ys = np.empty(n_steps + 1, dtype=complex)
    y = complex(y0)
    ys[0] = y
    half = dt / 2
    for i in range(n_steps):
        t = ts[i]
        k1 = f(t, y)
        k2 = f(t + half, y + half * k1)
        k3 = f(t + half, y + half * k2)
        k4 = f(ts[i + 1], y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[i + 1] = y
    return ts, ys


def bloch_rhs(d: TwoLevelDrive):
    det, eps, w = d.detuning, d.modulation, d.mech_frequency
    g2 = d.decay / 2
    drive = 0.5j * d.rabi
    cos = math.cos

    def f(t, rho):
        return complex(-g2, det + eps * cos(w * t)) * rho + drive

    return f


def integrate_bloch(d: TwoLevelDrive, t_end: float, steps_per_period: int = 1000,
                    rho0: complex | str = 0j, check_periodic: bool = False,
                    periodic_rtol: float = PERIODIC_RTOL):
    """Integrate the coherence from t = 0 to ``t_end``.

    The step is period/steps_per_period so that sample times land on whole
    periods. ``rho0="pss"`` starts from the analytic periodic steady state
    (exact-a0 form), which skips the 1/Gamma transient; the run then shows
    whether that state is invariant.

    Returns:
        (t, rho) arrays.

    Raises:
        NonConvergent: if ``check_periodic`` and the last two periods differ
            by more than ``periodic_rtol * |a0|``.
    """
    if steps_per_period < 100:
        raise ValueError("steps_per_period must be >= 100")
    dt = d.period / steps_per_period
    n_steps = max(int(math.ceil(t_end / dt - 1e-9)), 1)
    if isinstance(rho0, str):
        if rho0 != "pss":
            raise ValueError(f"unknown initial state {rho0!r}")
        rho0 = pss_coherence(0.0, d, a0_form="exact")
    ts, ys = rk4(bloch_rhs(d), rho0, 0.0, dt, n_steps)
    if check_periodic:
        if n_steps < 2 * steps_per_period:
            raise NonConvergent("need at least two mechanical periods to test periodicity")
        resid = np.max(np.abs(ys[-steps_per_period - 1:] - ys[-2 * steps_per_period - 1:-steps_per_period]))
        scale = abs(_a0(d, "exact"))
        if resid > periodic_rtol * scale:
            raise NonConvergent(f"periodic residual {resid / scale:.3g} (relative) exceeds {periodic_rtol:g}")
    return ts, ys


def settle_time(d: TwoLevelDrive, periodic_rtol: float = PERIODIC_RTOL) -> float:
    """Run length that lets a start from rest relax.

    At least 10/Gamma and 50 periods, and long enough for the transient
    envelope exp(-Gamma t/2) to fall a decade below ``periodic_rtol``.
    """
    return max(10 / d.decay, 50 * d.period, 2 * math.log(10 / periodic_rtol) / d.decay)


def _verdict(ratio: float) -> str:
    if ratio < PASS_THRESHOLD:
        return "pass"
    if ratio < WARN_THRESHOLD:
        return "warn"
    return "fail"


def regime_check(d: TwoLevelDrive) -> dict:
    """Ratios that must be small for the dispersive, adiabatic, weak-drive picture."""
    ratios = {
        "adiabatic_wM2_over_dbar2": d.mech_frequency**2 / abs(d.complex_detuning) ** 2,
        "decay_over_detuning": d.decay / abs(d.detuning),
        "rabi_over_detuning": abs(d.rabi / d.detuning),
    }
    return {name: {"value": v, "verdict": _verdict(v)} for name, v in ratios.items()}
