"""Dense steady states of the interacting single-excitation chain."""

from src.lindblad.problem import (
    TruncatedLindbladProblem,
    build_liouvillian,
    hamiltonian,
    lowering_operators,
)
from src.lindblad.solver import (
    DenseSteadyState,
    correlation_matrix,
    nonlocal_fraction,
    steady_state,
)

__all__ = [
    "DenseSteadyState",
    "TruncatedLindbladProblem",
    "build_liouvillian",
    "correlation_matrix",
    "hamiltonian",
    "lowering_operators",
    "nonlocal_fraction",
    "steady_state",
]
