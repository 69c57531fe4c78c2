"""Detection budget: photon flux, hole lifetime under probing, shot noise,
mechanical sidebands, radiation pressure and stability requirements."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import c as C_LIGHT, h as PLANCK, hbar

from .coupling import CouplingResult
from .holeburn import BurnSpec
from .model import MechanicsDerived, ProbeSpec

# Frequency stability is asked to be this many times better than the
# zero-point edge shift.
LINEWIDTH_MARGIN = 10.0


@dataclass(frozen=True)
class DetectionBudget:
    photon_rate: float
    overburn_time: float
    integration_time: float
    shot_noise_phase: float

    def as_dict(self) -> dict:
        return {
            "photon_rate_per_s": self.photon_rate,
            "overburn_time_s": self.overburn_time,
            "integration_time_s": self.integration_time,
            "shot_noise_phase_rad": self.shot_noise_phase,
        }


@dataclass(frozen=True)
class SidebandReport:
    """Integrated sideband phases (rad).

    ``thermal_phase`` uses the amplitude convention selected by the caller,
    ``total_phase`` always the quantum rms amplitude, and ``classical_phase``
    the Brownian part alone, x_zpf*sqrt(2n).
    """

    thermal_phase: float
    zeropoint_phase: float
    total_phase: float
    classical_phase: float
    relative_excess: float
    temperature: float

    def as_dict(self) -> dict:
        return {
            "temperature_K": self.temperature,
            "thermal_phase_rad": self.thermal_phase,
            "zeropoint_phase_rad": self.zeropoint_phase,
            "total_phase_rad": self.total_phase,
            "classical_phase_rad": self.classical_phase,
            "relative_excess": self.relative_excess if math.isfinite(self.relative_excess) else None,
        }


def photon_rate(probe: ProbeSpec) -> float:
    return probe.power / (hbar * probe.angular_frequency)


def overburn_time(gamma: float) -> float:
    if not gamma > 0:
        raise ValueError("linewidth must be > 0")
    return 4 * math.pi / gamma


def shot_noise_phase(probe: ProbeSpec, t_int: float) -> float:
    """Phase resolution 1/sqrt(N) for the photons collected in ``t_int``."""
    if not t_int > 0:
        raise ValueError("integration time must be > 0")
    return 1.0 / math.sqrt(photon_rate(probe) * t_int)


def detection_budget(probe: ProbeSpec, gamma: float, t_int: float | None = None) -> DetectionBudget:
    tau = overburn_time(gamma)
    t = tau if t_int is None else t_int
    return DetectionBudget(photon_rate(probe), tau, t, shot_noise_phase(probe, t))


def sideband_phases(dvdx0: float, probe: ProbeSpec, mech: MechanicsDerived,
                    convention: str = "quantum") -> SidebandReport:
    """Sideband phases for the mechanics' temperature.

    Args:
        dvdx0: Coupling slope dV/dX at X = 0 (J/m).
        probe: Probe beam (its power sets the phase-per-energy conversion).
        mech: Derived mechanics, which carries the temperature.
        convention: ``"quantum"`` or ``"classical"`` amplitude for
            ``thermal_phase``.
    """
    if not probe.power > 0:
        raise ValueError("sideband phases need a non-zero probe power")
    per_metre = abs(dvdx0) * probe.angular_frequency / probe.power
    n = mech.mean_occupancy
    zp = per_metre * mech.x_zpf
    total = zp * math.sqrt(2 * n + 1)
    classical = zp * math.sqrt(2 * n)
    excess = total / classical - 1 if classical > 0 else math.inf
    return SidebandReport(
        thermal_phase=per_metre * mech.amplitude(convention),
        zeropoint_phase=zp,
        total_phase=total,
        classical_phase=classical,
        relative_excess=excess,
        temperature=mech.temperature,
    )


def radiation_pressure_displacement(probe: ProbeSpec, mech: MechanicsDerived) -> float:
    """Static tip shift if the beam were fully reflected by the resonator."""
    return 2 * probe.power / C_LIGHT / mech.spring_constant


def stability_requirements(coupling: CouplingResult, b: BurnSpec, mech: MechanicsDerived) -> dict:
    """Power and frequency stability needed to resolve zero-point motion.

    ``power_stability`` is the fractional power noise whose displacement
    equals x_zpf; it is ``None`` when there is no static displacement.
    """
    edge = b.strain_k * b.thickness / 2 * mech.x_zpf
    x_disp = abs(coupling.X_disp)
    return {
        "power_stability": mech.x_zpf / x_disp if x_disp > 0 else None,
        "edge_zpf_shift_Hz": edge,
        "laser_linewidth_bound_Hz": edge / LINEWIDTH_MARGIN,
    }


def rabi_frequency(probe: ProbeSpec, gamma: float) -> float:
    """Two-level Rabi frequency (rad/s) for the probe intensity.

    Uses Omega^2 = Gamma^2 I / (2 I_sat) with I_sat = pi h c Gamma / (3 lambda^3),
    i.e. assumes the whole linewidth is radiative on this transition.
    """
    i_sat = math.pi * PLANCK * C_LIGHT * gamma / (3 * probe.wavelength**3)
    return gamma * math.sqrt(probe.intensity / (2 * i_sat))
