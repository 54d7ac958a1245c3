"""Wannier-basis interaction coefficients and the single-site truncation check."""

from src.interactions.coefficients import (
    InteractionTable,
    TruncatedCouplings,
    build_interaction_table,
    contributing_tuples,
    truncated_couplings,
    u_eff,
)
from src.interactions.kerr import (
    kerr_correlation_dense,
    kerr_correlation_exact,
    minimum_onsite_interaction,
    truncation_threshold,
)

__all__ = [
    "InteractionTable",
    "TruncatedCouplings",
    "build_interaction_table",
    "contributing_tuples",
    "kerr_correlation_dense",
    "kerr_correlation_exact",
    "minimum_onsite_interaction",
    "truncated_couplings",
    "truncation_threshold",
    "u_eff",
]
