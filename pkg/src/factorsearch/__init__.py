"""Qudit state-vector simulation of factorized quantum database search."""

__version__ = "0.1.0"

from .algorithms import (
    NoiseModel,
    SearchOutcome,
    StepTrace,
    assembly,
    factorized_search,
    factorized_search_with_noise,
    grover_iteration_count,
    grover_search,
    grover_success_probability,
)
from .oracles import QueryCounter
from .statevec import Gate4, LabelString, StateVector, uniform_superposition

__all__ = [
    "Gate4",
    "LabelString",
    "NoiseModel",
    "QueryCounter",
    "SearchOutcome",
    "StateVector",
    "StepTrace",
    "assembly",
    "factorized_search",
    "factorized_search_with_noise",
    "grover_iteration_count",
    "grover_search",
    "grover_success_probability",
    "uniform_superposition",
]
