"""Flat ``section.key_unit = value`` scenario files.

One assignment per line, ``#`` starts a comment. Every key carries its SI
unit as a suffix. Unknown and duplicate keys are errors. Keys without a
default must be present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ParseError, PhysicsDomainError, UnknownParameter, ValidationError
from .holeburn import BurnSpec
from .model import CantileverSpec, Environment, IonEnsembleSpec, ProbeSpec

REQUIRED = object()
# None as a default means "derived from other inputs at run time".


@dataclass(frozen=True)
class Key:
    name: str
    default: object = REQUIRED
    kind: type = float
    choices: tuple = ()


SCHEMA = {k.name: k for k in [
    Key("cantilever.length_m"),
    Key("cantilever.thickness_m"),
    Key("cantilever.width_m"),
    Key("cantilever.youngs_modulus_pa"),
    Key("cantilever.effective_mass_kg"),
    Key("cantilever.mode_frequency_hz"),
    Key("ions.wavelength_m"),
    Key("ions.linewidth_rad_s"),
    Key("ions.strain_sensitivity_hz_per_pa"),
    Key("ions.zeeman_sensitivity_hz_per_t"),
    Key("ions.ion_density_per_m3"),
    Key("ions.inhomogeneous_width_hz", 1.4e9),
    Key("burn.center_frequency_hz", 0.0),
    Key("burn.half_width_hz"),
    Key("burn.bias_gradient_t_per_m"),
    Key("burn.smear_amplitude_m", 0.0),
    Key("probe.wavelength_m", None),
    Key("probe.power_w"),
    Key("probe.cross_section_m2", 100e-12),
    Key("probe.extent_z_m", 10e-6),
    Key("environment.temperature_k"),
    Key("environment.optical_power_limit_w", 3e-3),
    Key("coupling.displacement_m", None),
    Key("coupling.cutoff_hz", None),
    Key("coupling.degenerate", "raise", str, ("raise", "limit")),
    Key("detection.integration_time_s", None),
    Key("detection.short_integration_time_s", 25e-6),
    Key("detection.excess_temperature_k", 30e-3),
    Key("detection.amplitude_convention", "quantum", str, ("quantum", "classical")),
    Key("bloch.rabi_rad_s", None),
    Key("bloch.detuning_rad_s", None),
    Key("bloch.decay_rad_s", None),
    Key("bloch.modulation_rad_s", None),
    Key("bloch.mech_frequency_rad_s", None),
    Key("bloch.periods", 5, int),
    Key("bloch.steps_per_period", 1000, int),
    Key("bloch.start", "pss", str, ("pss", "rest")),
]}


def _convert(key: Key, raw: str, line=None):
    text = raw.strip()
    if not text:
        raise ParseError(key.name, "empty value", line)
    if key.kind is str:
        if key.choices and text not in key.choices:
            raise ParseError(key.name, f"must be one of {', '.join(key.choices)}", line)
        return text
    try:
        value = float(text)
    except ValueError:
        raise ParseError(key.name, f"not a number: {text!r}", line) from None
    if not math.isfinite(value):
        raise ParseError(key.name, "value must be finite", line)
    if key.kind is int:
        if value != int(value):
            raise ParseError(key.name, "must be an integer", line)
        return int(value)
    return value


@dataclass
class ScenarioConfig:
    """Explicit assignments plus schema defaults.

    ``explicit`` holds only what the file (or overrides) set; everything
    else resolves through :data:`SCHEMA`.
    """

    explicit: dict = field(default_factory=dict)

    def __getitem__(self, name):
        if name not in SCHEMA:
            raise UnknownParameter(f"unknown parameter {name!r}")
        if name in self.explicit:
            return self.explicit[name]
        return SCHEMA[name].default

    def source(self, name) -> str:
        if name in self.explicit:
            return "config"
        return "default" if SCHEMA[name].default is not None else "derived"

    def with_value(self, name: str, value) -> "ScenarioConfig":
        if name not in SCHEMA:
            raise UnknownParameter(f"unknown parameter {name!r}")
        key = SCHEMA[name]
        value = _convert(key, value if isinstance(value, str) else repr(value))
        cfg = ScenarioConfig({**self.explicit, name: value})
        cfg.validate()
        return cfg

    # domain objects

    def cantilever(self) -> CantileverSpec:
        return CantileverSpec(
            length=self["cantilever.length_m"],
            thickness=self["cantilever.thickness_m"],
            width=self["cantilever.width_m"],
            youngs_modulus=self["cantilever.youngs_modulus_pa"],
            effective_mass=self["cantilever.effective_mass_kg"],
            mode_frequency=self["cantilever.mode_frequency_hz"],
        )

    def ions(self) -> IonEnsembleSpec:
        return IonEnsembleSpec(
            wavelength=self["ions.wavelength_m"],
            linewidth=self["ions.linewidth_rad_s"],
            strain_sensitivity=self["ions.strain_sensitivity_hz_per_pa"],
            zeeman_sensitivity=self["ions.zeeman_sensitivity_hz_per_t"],
            ion_density=self["ions.ion_density_per_m3"],
            inhomogeneous_width=self["ions.inhomogeneous_width_hz"],
        )

    def burn(self) -> BurnSpec:
        return BurnSpec.from_specs(
            self.cantilever(), self.ions(),
            half_width=self["burn.half_width_hz"],
            bias_gradient=self["burn.bias_gradient_t_per_m"],
            smear_amplitude=self["burn.smear_amplitude_m"],
            center_frequency=self["burn.center_frequency_hz"],
        )

    def probe(self) -> ProbeSpec:
        wavelength = self["probe.wavelength_m"]
        return ProbeSpec(
            wavelength=self["ions.wavelength_m"] if wavelength is None else wavelength,
            power=self["probe.power_w"],
            cross_section=self["probe.cross_section_m2"],
            extent_z=self["probe.extent_z_m"],
        )

    def environment(self) -> Environment:
        return Environment(self["environment.temperature_k"], self["environment.optical_power_limit_w"])

    def validate(self):
        missing = [k.name for k in SCHEMA.values() if k.default is REQUIRED and k.name not in self.explicit]
        if missing:
            raise ParseError(missing[0], "required key missing" +
                             (f" (also missing: {', '.join(missing[1:])})" if len(missing) > 1 else ""))
        try:
            self.cantilever()
            self.ions()
            self.probe()
            self.environment()
            self.burn()
        except PhysicsDomainError as exc:
            raise ValidationError(str(exc)) from exc
        for name in ("detection.integration_time_s", "detection.short_integration_time_s"):
            if self[name] is not None and not self[name] > 0:
                raise ValidationError(f"{name} must be > 0")
        if self["coupling.cutoff_hz"] is not None and not self["coupling.cutoff_hz"] > 0:
            raise ValidationError("coupling.cutoff_hz must be > 0")
        if self["bloch.steps_per_period"] < 100:
            raise ValidationError("bloch.steps_per_period must be >= 100")
        if self["bloch.periods"] < 1:
            raise ValidationError("bloch.periods must be >= 1")


def parse_config(text: str) -> ScenarioConfig:
    explicit = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(line, "expected 'key = value'", lineno)
        name, value = (part.strip() for part in line.split("=", 1))
        if name not in SCHEMA:
            raise ParseError(name, "unknown key", lineno)
        if name in explicit:
            raise ParseError(name, "duplicate key", lineno)
        explicit[name] = _convert(SCHEMA[name], value, lineno)
    cfg = ScenarioConfig(explicit)
    cfg.validate()
    return cfg


def serialize_config(cfg: ScenarioConfig) -> str:
    """Normalized text: explicit keys only, sorted, floats as repr."""
    lines = []
    for name in sorted(cfg.explicit):
        value = cfg.explicit[name]
        lines.append(f"{name} = {value!r}" if not isinstance(value, str) else f"{name} = {value}")
    return "\n".join(lines) + "\n"


def apply_overrides(cfg: ScenarioConfig, assignments) -> ScenarioConfig:
    """Apply ``key=value`` strings on top of a parsed config."""
    for item in assignments or ():
        if "=" not in item:
            raise ParseError(item, "override must be key=value")
        name, value = (part.strip() for part in item.split("=", 1))
        if name not in SCHEMA:
            raise ParseError(name, "unknown key")
        cfg = cfg.with_value(name, value)
    return cfg


def numeric_keys():
    return [k.name for k in SCHEMA.values() if k.kind in (float, int)]
