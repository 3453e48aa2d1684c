"""Optimal programmable unambiguous discrimination between two unknown latitudinal qubit states."""

from .discrimination import (
    OptimumReport,
    Povm,
    analytic_subspace_optimum,
    optimal_average_probability,
    pure_state_success,
    total_povm,
)
from .states import Priors

__version__ = "0.1.0"

__all__ = [
    "OptimumReport",
    "Povm",
    "Priors",
    "analytic_subspace_optimum",
    "optimal_average_probability",
    "pure_state_success",
    "total_povm",
]
