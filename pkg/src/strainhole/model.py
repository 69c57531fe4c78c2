"""Physical specifications of the cantilever, the dopant ensemble and the
environment, plus the mechanical and spectroscopic constants derived from them.

All quantities are SI. Detunings and frequency shifts are in Hz (not rad/s)
everywhere except in :mod:`strainhole.bloch`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import hbar, k as k_B

from .errors import BeamOverfill, ValidationError

# Relative slack for geometric containment checks (beam vs crystal).
GEOMETRY_RTOL = 1e-9


def _require_positive(obj, *names):
    for name in names:
        value = getattr(obj, name)
        if not (value > 0 and math.isfinite(value)):
            raise ValidationError(f"{type(obj).__name__}.{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class CantileverSpec:
    """Single-clamped rectangular cantilever.

    Attributes:
        length: Beam length L along the axis (m).
        thickness: Thickness e along the bending direction (m).
        width: Width w transverse to both (m).
        youngs_modulus: Young's modulus E (Pa).
        effective_mass: Effective mass of the fundamental mode (kg).
        mode_frequency: Mechanical eigenfrequency (Hz).
    """

    length: float
    thickness: float
    width: float
    youngs_modulus: float
    effective_mass: float
    mode_frequency: float

    def __post_init__(self):
        _require_positive(self, "length", "thickness", "width", "youngs_modulus",
                          "effective_mass", "mode_frequency")
        if self.thickness > self.length:
            raise ValidationError("CantileverSpec.thickness must not exceed length (thin-beam model)")


@dataclass(frozen=True)
class IonEnsembleSpec:
    """Optically active dopants.

    ``strain_sensitivity`` is signed (Hz/Pa); only its magnitude enters the
    coupling constant since the sign flips between the two faces anyway.
    ``linewidth`` is Gamma in rad/s.
    """

    wavelength: float
    linewidth: float
    strain_sensitivity: float
    zeeman_sensitivity: float
    ion_density: float
    inhomogeneous_width: float = 1.4e9

    def __post_init__(self):
        _require_positive(self, "wavelength", "linewidth", "zeeman_sensitivity",
                          "inhomogeneous_width")
        if not math.isfinite(self.strain_sensitivity):
            raise ValidationError("IonEnsembleSpec.strain_sensitivity must be finite")
        if not (self.ion_density >= 0 and math.isfinite(self.ion_density)):
            raise ValidationError("IonEnsembleSpec.ion_density must be finite and >= 0")


@dataclass(frozen=True)
class Environment:
    temperature: float
    optical_power_limit: float = 3e-3

    def __post_init__(self):
        if not (self.temperature >= 0 and math.isfinite(self.temperature)):
            raise ValidationError("Environment.temperature must be finite and >= 0")
        _require_positive(self, "optical_power_limit")


@dataclass(frozen=True)
class ProbeSpec:
    """Weak probe beam tuned to the hole centre.

    Attributes:
        wavelength: Vacuum wavelength (m).
        power: Optical power (W).
        cross_section: Beam area A (m^2).
        extent_z: Footprint of the beam along the cantilever axis (m). The
            extent along the thickness is ``cross_section / extent_z``.
    """

    wavelength: float
    power: float
    cross_section: float = 100e-12
    extent_z: float = 10e-6

    def __post_init__(self):
        _require_positive(self, "wavelength", "cross_section", "extent_z")
        if not (self.power >= 0 and math.isfinite(self.power)):
            raise ValidationError("ProbeSpec.power must be finite and >= 0")

    @property
    def intensity(self) -> float:
        return self.power / self.cross_section

    @property
    def angular_frequency(self) -> float:
        return 2 * math.pi * 299792458.0 / self.wavelength


@dataclass(frozen=True)
class MechanicsDerived:
    """Mechanical constants of the fundamental mode at a given temperature.

    ``x_thermal`` is the classical equipartition amplitude sqrt(k_B T / K),
    ``x_rms`` the quantum rms amplitude x_zpf * sqrt(2 n + 1). The two agree
    at high temperature; only ``x_rms`` has the correct zero-temperature
    limit.
    """

    angular_frequency: float
    spring_constant: float
    effective_mass: float
    x_zpf: float
    x_thermal: float
    x_rms: float
    mean_occupancy: float
    temperature: float

    def amplitude(self, convention: str = "quantum") -> float:
        if convention == "quantum":
            return self.x_rms
        if convention == "classical":
            return self.x_thermal
        raise ValueError(f"unknown amplitude convention {convention!r}")


def mean_occupancy(omega: float, temperature: float) -> float:
    """Bose-Einstein occupancy of a mode at angular frequency ``omega``."""
    if temperature == 0:
        return 0.0
    x = hbar * omega / (k_B * temperature)
    if x > 700:
        return 0.0
    return 1.0 / math.expm1(x)


def derive_mechanics(c: CantileverSpec, env: Environment) -> MechanicsDerived:
    omega = 2 * math.pi * c.mode_frequency
    spring = c.effective_mass * omega**2
    x_zpf = math.sqrt(hbar / (2 * c.effective_mass * omega))
    x_thermal = math.sqrt(k_B * env.temperature / spring)
    n_bar = mean_occupancy(omega, env.temperature)
    return MechanicsDerived(
        angular_frequency=omega,
        spring_constant=spring,
        effective_mass=c.effective_mass,
        x_zpf=x_zpf,
        x_thermal=x_thermal,
        x_rms=x_zpf * math.sqrt(2 * n_bar + 1),
        mean_occupancy=n_bar,
        temperature=env.temperature,
    )


def strain_coupling_k(c: CantileverSpec, ions: IonEnsembleSpec) -> float:
    """Strain-induced shift per unit height and unit tip displacement (Hz/m^2).

    A tip-loaded Euler-Bernoulli beam has curvature 3X/L^2 at the clamp, so
    an ion at height x above the neutral plane sees strain 3Xx/L^2 and shifts
    by |s| E 3Xx/L^2.
    """
    return 3 * c.youngs_modulus * abs(ions.strain_sensitivity) / c.length**2


def ion_spectral_density(ions: IonEnsembleSpec, beam: ProbeSpec, c: CantileverSpec) -> float:
    """Ions addressed by the beam per Hz of detuning and per metre of height.

    The beam crosses the full width ``w`` of the crystal and covers
    ``beam.extent_z`` along the axis; the inhomogeneous distribution is taken
    flat over ``inhomogeneous_width``.
    """
    extent_x = beam.cross_section / beam.extent_z
    slack = 1 + GEOMETRY_RTOL
    if beam.extent_z > c.length * slack:
        raise BeamOverfill(f"beam extent along axis {beam.extent_z:g} m exceeds length {c.length:g} m")
    if extent_x > c.thickness * slack:
        raise BeamOverfill(f"beam extent along thickness {extent_x:g} m exceeds thickness {c.thickness:g} m")
    return ions.ion_density * c.width * beam.extent_z / ions.inhomogeneous_width


def hz_to_rad_per_s(detuning_hz: float) -> float:
    return 2 * math.pi * detuning_hz
