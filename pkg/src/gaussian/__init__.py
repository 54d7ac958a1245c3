"""Quadratic moment-equation steady states and their observables."""

from src.gaussian.moments import (
    DriftProblem,
    DriveSpec,
    FirstMoments,
    MomentState,
    build_drift,
    evolve_moments,
    gain_kernel,
    solve_first_moments,
    solve_second_moments,
    stability_check,
)
from src.gaussian.observables import (
    CoherenceMap,
    decay_length,
    decay_lengths,
    g1,
    site_basis_densities,
)
from src.gaussian.steady_state import SteadyStateReport, solve_steady_state

__all__ = [
    "CoherenceMap",
    "DriftProblem",
    "DriveSpec",
    "FirstMoments",
    "MomentState",
    "SteadyStateReport",
    "build_drift",
    "decay_length",
    "decay_lengths",
    "evolve_moments",
    "g1",
    "gain_kernel",
    "site_basis_densities",
    "solve_first_moments",
    "solve_second_moments",
    "solve_steady_state",
    "stability_check",
]
