"""Particle-based kinetic simulator for coupled opinion-popularity dynamics
on adaptive social networks, with closed-form feedback controls."""

__version__ = "0.1.0"

from .config import (ActivationSpec, ConfigError, ContactControlParams, ContactParams,
                     GroupSpec, OpinionControlParams, OpinionParams, ScenarioConfig,
                     SimParams, parse_scenario, preset, serialize_scenario)
from .engine import RunResult, StepContext, initialize, run, step
from .stats import Ensemble, Observables

__all__ = [
    "ActivationSpec", "ConfigError", "ContactControlParams", "ContactParams",
    "Ensemble", "GroupSpec", "Observables", "OpinionControlParams", "OpinionParams",
    "RunResult", "ScenarioConfig", "SimParams", "StepContext",
    "initialize", "parse_scenario", "preset", "run", "serialize_scenario", "step",
]
