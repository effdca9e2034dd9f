"""Simulator for nonadiabatic holonomic gates on three-level systems."""

from .errors import ConfigurationError, HolosimError, InvariantViolation, ShapeError, ValidationError
from .lindblad import DecoherenceParams, avg_gate_fidelity, integrate, population_trace, state_fidelity
from .propagator import NoiseParams, evolve_sequence, scheme_fidelity
from .pulses import ALL_SCHEMES, S_GATE, X_HALF, GateParams, Scheme, build_sequence, target_gate

__version__ = "0.1.0"

__all__ = [
    "ALL_SCHEMES", "ConfigurationError", "DecoherenceParams", "GateParams", "HolosimError",
    "InvariantViolation", "NoiseParams", "S_GATE", "Scheme", "ShapeError", "ValidationError", "X_HALF",
    "avg_gate_fidelity", "build_sequence", "evolve_sequence", "integrate", "population_trace",
    "scheme_fidelity", "state_fidelity", "target_gate",
]
