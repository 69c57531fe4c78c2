"""Scenario execution behind the CLI: full report, sweeps, hole profiles and
coherence traces. Everything returned here is plain data (dicts and row
lists) ready for JSON or CSV output."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import bloch, coupling as cp, observables as obs
from .config import SCHEMA, ScenarioConfig
from .errors import StrainholeError, UnknownParameter
from .holeburn import BurnSpec, burn_schedule, hole_profile
from .model import (CantileverSpec, Environment, IonEnsembleSpec, MechanicsDerived, ProbeSpec,
                    derive_mechanics, ion_spectral_density)

# Reference values quoted for the worked example, for side-by-side display only.
REFERENCE_VALUES = [
    ("X_disp_m", 0.4e-12),
    ("carrier_phase_rad", 0.2e-3),
    ("overburn_time_s", 16e-3),
    ("shot_noise_phase_overburn_rad", 0.45e-6),
    ("shot_noise_phase_short_rad", 14e-6),
    ("radiation_pressure_displacement_m", 20e-15),
    ("brownian_amplitude_m", 0.2e-12),
    ("thermal_sideband_phase_rad", 0.11e-3),
    ("zeropoint_sideband_phase_rad", 0.4e-6),
    ("relative_excess_low_T", 1e-3),
    ("x_zpf_m", 1e-15),
    ("power_stability", 1e-4),
    ("edge_zpf_shift_Hz", 37.0),
]

ALL_METHODS = (cp.Method.NUMERIC, cp.Method.CLOSED, cp.Method.LOWT)

# Above this max relative deviation a trace is flagged as not following adiabatically.
ADIABATIC_FLAG = 1e-2


def parse_methods(name: str):
    if name == "all":
        return ALL_METHODS
    return (cp.Method.parse(name),)


@dataclass(frozen=True)
class Scenario:
    cfg: ScenarioConfig
    cantilever: CantileverSpec
    ions: IonEnsembleSpec
    burn: BurnSpec
    probe: ProbeSpec
    environment: Environment
    mechanics: MechanicsDerived
    density: float

    @classmethod
    def from_config(cls, cfg: ScenarioConfig) -> "Scenario":
        cant, ions, probe, env = cfg.cantilever(), cfg.ions(), cfg.probe(), cfg.environment()
        return cls(cfg, cant, ions, cfg.burn(), probe, env, derive_mechanics(cant, env),
                   ion_spectral_density(ions, probe, cant))

    @property
    def gamma(self) -> float:
        return self.ions.linewidth

    def coupling_kwargs(self, method: cp.Method) -> dict:
        if method is cp.Method.NUMERIC and self.cfg["coupling.cutoff_hz"] is not None:
            return {"cutoff": self.cfg["coupling.cutoff_hz"]}
        if method is cp.Method.CLOSED:
            return {"degenerate": self.cfg["coupling.degenerate"]}
        return {}

    def couple(self, method: cp.Method) -> cp.CouplingResult:
        return cp.couple(self.burn, self.density, self.probe, self.gamma, self.mechanics,
                         method, X=self.cfg["coupling.displacement_m"], **self.coupling_kwargs(method))

    def amplitude(self) -> float:
        return self.mechanics.amplitude(self.cfg["detection.amplitude_convention"])

    def drive(self) -> bloch.TwoLevelDrive:
        """Drive seen by the ions nearest the hole edge, unless overridden."""
        cfg = self.cfg
        defaults = {
            "bloch.rabi_rad_s": lambda: obs.rabi_frequency(self.probe, self.gamma),
            "bloch.detuning_rad_s": lambda: 2 * math.pi * 3 * self.burn.half_width,
            "bloch.decay_rad_s": lambda: self.gamma,
            "bloch.modulation_rad_s": lambda: (2 * math.pi * self.burn.strain_k
                                               * self.cantilever.thickness / 2 * self.amplitude()),
            "bloch.mech_frequency_rad_s": lambda: self.mechanics.angular_frequency,
        }
        vals = {k: (cfg[k] if cfg[k] is not None else f()) for k, f in defaults.items()}
        return bloch.TwoLevelDrive(
            rabi=vals["bloch.rabi_rad_s"],
            detuning=vals["bloch.detuning_rad_s"],
            decay=vals["bloch.decay_rad_s"],
            modulation=vals["bloch.modulation_rad_s"],
            mech_frequency=vals["bloch.mech_frequency_rad_s"],
        )


def _echo_inputs(cfg: ScenarioConfig) -> dict:
    return {name: {"value": cfg[name], "source": cfg.source(name)} for name in SCHEMA}


def _regime_warnings(regime: dict) -> list[str]:
    return [f"regime {name} = {entry['value']:.3g} ({entry['verdict']})"
            for name, entry in regime.items() if entry["verdict"] != "pass"]


def _dedupe(items):
    seen = []
    for item in items:
        if item not in seen:
            seen.append(item)
    return seen


def run_paper_example(cfg: ScenarioConfig) -> dict:
    """Full chain: mechanics, coupling by all three routes, detection budget,
    sidebands, stability, regime diagnostics and the reference comparison.

    Returns the comparable report body (no timestamps).
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        body = _paper_example_body(cfg)
    body["warnings"] = _dedupe(body["warnings"] + [str(w.message) for w in caught])
    return body


def _paper_example_body(cfg: ScenarioConfig) -> dict:
    sc = Scenario.from_config(cfg)
    mech, probe, burn = sc.mechanics, sc.probe, sc.burn
    warn = []

    results = {m.value: sc.couple(m) for m in ALL_METHODS}
    primary = results[cp.Method.NUMERIC.value]

    t_int = cfg["detection.integration_time_s"]
    budget = obs.detection_budget(probe, sc.gamma, t_int)
    short = obs.shot_noise_phase(probe, cfg["detection.short_integration_time_s"])

    sidebands = obs.sideband_phases(primary.dVdX0, probe, mech, cfg["detection.amplitude_convention"])
    sidebands_classical = obs.sideband_phases(primary.dVdX0, probe, mech, "classical")
    t_low = cfg["detection.excess_temperature_k"]
    mech_low = derive_mechanics(sc.cantilever, Environment(t_low, sc.environment.optical_power_limit))
    sidebands_low = obs.sideband_phases(primary.dVdX0, probe, mech_low, cfg["detection.amplitude_convention"])
    mech_zero = derive_mechanics(sc.cantilever, Environment(0.0, sc.environment.optical_power_limit))
    sidebands_zero = obs.sideband_phases(primary.dVdX0, probe, mech_zero)

    radiation = obs.radiation_pressure_displacement(probe, mech)
    stability = obs.stability_requirements(primary, burn, mech)
    drive = sc.drive()
    regime = bloch.regime_check(drive)
    warn += _regime_warnings(regime)
    if probe.power > sc.environment.optical_power_limit:
        warn.append(f"probe power {probe.power:g} W exceeds the optical power limit "
                    f"{sc.environment.optical_power_limit:g} W")

    computed = {
        "X_disp_m": primary.X_disp,
        "carrier_phase_rad": abs(primary.carrier_phase),
        "overburn_time_s": budget.overburn_time,
        "shot_noise_phase_overburn_rad": obs.shot_noise_phase(probe, budget.overburn_time),
        "shot_noise_phase_short_rad": short,
        "radiation_pressure_displacement_m": radiation,
        "brownian_amplitude_m": mech.x_thermal,
        "thermal_sideband_phase_rad": sidebands.thermal_phase,
        "zeropoint_sideband_phase_rad": sidebands_zero.zeropoint_phase,
        "relative_excess_low_T": sidebands_low.relative_excess,
        "x_zpf_m": mech.x_zpf,
        "power_stability": stability["power_stability"],
        "edge_zpf_shift_Hz": stability["edge_zpf_shift_Hz"],
    }
    comparison = []
    for name, quoted in REFERENCE_VALUES:
        value = computed[name]
        ratio = quoted / value if value else None
        comparison.append({
            "quantity": name,
            "computed": value,
            "quoted": quoted,
            "quoted_over_computed": ratio,
            "relative_deviation": (value - quoted) / quoted if value is not None else None,
        })
    ratios = {row["quantity"]: row["quoted_over_computed"] for row in comparison}
    shot_consistency = ratios["shot_noise_phase_short_rad"] / ratios["shot_noise_phase_overburn_rad"]

    return {
        "inputs": _echo_inputs(cfg),
        "derived": {
            "omega_M_rad_per_s": mech.angular_frequency,
            "spring_constant_N_per_m": mech.spring_constant,
            "x_zpf_m": mech.x_zpf,
            "x_thermal_classical_m": mech.x_thermal,
            "x_rms_quantum_m": mech.x_rms,
            "mean_occupancy": mech.mean_occupancy,
            "strain_k_Hz_per_m2": burn.strain_k,
            "ion_spectral_density_per_Hz_m": sc.density,
            "sigma0_m2": cp.cross_section_sigma0(probe.wavelength, sc.gamma),
            "omega0_rad_per_s": probe.angular_frequency,
            "intensity_W_per_m2": probe.intensity,
            "burn_matching": burn.matching_residual(),
        },
        "burn_schedule": [
            {"gradient_T_per_m": s.gradient, "scan_lo_Hz": s.scan_interval[0], "scan_hi_Hz": s.scan_interval[1]}
            for s in burn_schedule(burn)
        ],
        "coupling": {name: r.as_dict() for name, r in results.items()},
        "detection": {**budget.as_dict(), "short_integration_time_s": cfg["detection.short_integration_time_s"],
                      "short_shot_noise_phase_rad": short},
        "sidebands": {
            "operating": sidebands.as_dict(),
            "operating_classical": sidebands_classical.as_dict(),
            "low_temperature": sidebands_low.as_dict(),
            "zero_temperature": sidebands_zero.as_dict(),
        },
        "radiation_pressure_displacement_m": radiation,
        "radiation_over_dispersive_displacement": radiation / abs(primary.X_disp) if primary.X_disp else None,
        "stability": stability,
        "drive": {
            "rabi_rad_per_s": drive.rabi, "detuning_rad_per_s": drive.detuning,
            "decay_rad_per_s": drive.decay, "modulation_rad_per_s": drive.modulation,
            "mech_frequency_rad_per_s": drive.mech_frequency,
        },
        "regime": regime,
        "reference_comparison": comparison,
        "shot_noise_ratio_consistency": shot_consistency,
        "warnings": warn,
    }


def coupling_results(cfg: ScenarioConfig, methods) -> dict:
    sc = Scenario.from_config(cfg)
    return {m.value: sc.couple(m).as_dict() for m in methods}


def render_hole(cfg: ScenarioConfig, X: float = 0.0, n_samples: int = 101):
    """Hole edges across the thickness at bending X, with the unbent edges alongside."""
    burn = cfg.burn()
    bent = hole_profile(burn, X, n_samples)
    flat = hole_profile(burn, 0.0, n_samples)
    header = ["x_m", "ell_L_Hz", "ell_R_Hz", "ell_L_X0_Hz", "ell_R_X0_Hz"]
    rows = [[x, l, r, l0, r0] for (x, l, r), (_, l0, r0) in zip(bent.rows(), flat.rows())]
    return header, rows


def bloch_trace(cfg: ScenarioConfig):
    """Coherence trajectory with the periodic-steady-state and adiabatic references.

    Returns (header, rows, summary). Deviations are measured over the last
    ``bloch.periods`` periods.
    """
    sc = Scenario.from_config(cfg)
    d = sc.drive()
    periods = cfg["bloch.periods"]
    spp = cfg["bloch.steps_per_period"]
    if cfg["bloch.start"] == "pss":
        t_end, rho0, check = periods * d.period, "pss", False
    else:
        t_end, rho0, check = bloch.settle_time(d) + periods * d.period, 0j, True
    ts, ys = bloch.integrate_bloch(d, t_end, spp, rho0=rho0, check_periodic=check)
    keep = slice(len(ts) - periods * spp - 1, None)
    ts, ys = ts[keep], ys[keep]
    pss = bloch.pss_coherence(ts, d, a0_form="exact")
    adi = bloch.adiabatic_coherence(ts, d)
    dev_pss = float(np.max(np.abs(ys - pss) / np.abs(pss))) if d.rabi else 0.0
    dev_adi = float(np.max(np.abs(adi - pss) / np.abs(pss))) if d.rabi else 0.0
    regime = bloch.regime_check(d)
    summary = {
        "max_rel_dev_integrated_vs_pss": dev_pss,
        "max_rel_dev_adiabatic_vs_pss": dev_adi,
        "adiabatic_following": dev_adi <= ADIABATIC_FLAG,
        "modulation_over_detuning": abs(d.modulation / d.detuning),
        "regime": regime,
        "warnings": _regime_warnings(regime) + (
            [] if dev_adi <= ADIABATIC_FLAG else
            [f"adiabatic formula deviates from the periodic steady state by {dev_adi:.3g}"]),
    }
    header = ["t_s", "re_rho", "im_rho", "re_pss", "im_pss", "re_adiabatic", "im_adiabatic"]
    rows = [[t, y.real, y.imag, p.real, p.imag, a.real, a.imag]
            for t, y, p, a in zip(ts.tolist(), ys.tolist(), pss.tolist(), adi.tolist())]
    return header, rows, summary


def _derived_row(sc: Scenario) -> dict:
    return {
        "strain_k_Hz_per_m2": sc.burn.strain_k,
        "ion_spectral_density_per_Hz_m": sc.density,
        "x_zpf_m": sc.mechanics.x_zpf,
        "overburn_time_s": obs.overburn_time(sc.gamma),
        "radiation_pressure_displacement_m": obs.radiation_pressure_displacement(sc.probe, sc.mechanics),
    }


def sweep(cfg: ScenarioConfig, parameter: str, values, methods=ALL_METHODS, jobs: int = 1):
    """One output row per value, in input order. Per-row failures land in
    the ``error`` column instead of aborting the sweep."""
    if parameter not in SCHEMA or SCHEMA[parameter].kind not in (float, int):
        raise UnknownParameter(f"{parameter!r} is not a numeric configuration key")
    values = [float(v) for v in values]
    if not all(math.isfinite(v) for v in values):
        raise ValueError("sweep values must be finite")

    columns = ["strain_k_Hz_per_m2", "ion_spectral_density_per_Hz_m", "x_zpf_m",
               "overburn_time_s", "radiation_pressure_displacement_m"]
    for m in methods:
        columns += [f"V_{m.value}_J", f"dVdX0_{m.value}_J_per_m", f"X_disp_{m.value}_m",
                    f"X_eval_{m.value}_m", f"carrier_phase_{m.value}_rad"]
    header = [parameter] + columns + ["error"]

    def one(value):
        out = dict.fromkeys(columns, "")
        try:
            sc = Scenario.from_config(cfg.with_value(parameter, value))
            out.update(_derived_row(sc))
            for m in methods:
                r = sc.couple(m)
                out.update({f"V_{m.value}_J": r.V, f"dVdX0_{m.value}_J_per_m": r.dVdX0,
                            f"X_disp_{m.value}_m": r.X_disp, f"X_eval_{m.value}_m": r.X,
                            f"carrier_phase_{m.value}_rad": r.carrier_phase})
            err = ""
        except StrainholeError as exc:
            err = f"{type(exc).__name__}: {exc}"
        return [value] + [out[c] for c in columns] + [err]

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(jobs) as pool:
            rows = list(pool.map(one, values))
    else:
        rows = [one(v) for v in values]
    return header, rows

