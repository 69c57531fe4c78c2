"""Dispersive optomechanical coupling between a probe laser and a
hole-burnt, strain-sensitive dopant ensemble in a cantilever."""

__version__ = "0.1.0"

from .model import (CantileverSpec, Environment, IonEnsembleSpec, MechanicsDerived, ProbeSpec,
                    derive_mechanics, ion_spectral_density, strain_coupling_k)
from .holeburn import BurnSpec, burn_schedule, hole_edges, hole_profile, is_dark
from .coupling import CouplingResult, Method, V_closed, V_lowT, V_numeric, couple, dVdX0
from .config import ScenarioConfig, parse_config, serialize_config

__all__ = [
    "CantileverSpec", "Environment", "IonEnsembleSpec", "MechanicsDerived", "ProbeSpec",
    "derive_mechanics", "ion_spectral_density", "strain_coupling_k",
    "BurnSpec", "burn_schedule", "hole_edges", "hole_profile", "is_dark",
    "CouplingResult", "Method", "V_closed", "V_lowT", "V_numeric", "couple", "dVdX0",
    "ScenarioConfig", "parse_config", "serialize_config",
]
