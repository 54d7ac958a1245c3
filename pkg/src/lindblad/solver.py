"""Steady states of the hard-core chain and their observables."""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from src.errors import ResidualTooLarge, ZeroTotalDensity
from src.gaussian.observables import CoherenceMap, g1
from src.lindblad.problem import TruncatedLindbladProblem, build_liouvillian, lowering_operators
from src.utils.logging import setup_logging
from src.utils.superoperator import SparseMatrix, null_state

logger = setup_logging(__name__)

ZERO_TOTAL = 1e-30
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class DenseSteadyState:
    """Density matrix of the chain with its correlations."""

    rho: NDArray[np.complex128]
    residual: float
    sites: NDArray[np.int64]
    correlations: NDArray[np.complex128]
    method: str
    parameters: dict[str, Any] = field(default_factory=dict)

    @property
    def densities(self) -> NDArray[np.float64]:
        return np.asarray(np.real(np.diag(self.correlations)))

    @property
    def trace_error(self) -> float:
        return float(abs(np.trace(self.rho) - 1.0))

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.rho)[0])

    @property
    def coherence(self) -> CoherenceMap:
        return g1(self.correlations, self.sites)

    def density(self, site: int) -> float:
        return float(self.densities[site - int(self.sites[0])])

    def density_frame(self) -> pd.DataFrame:
        """Columns: site, N, N_over_N0."""
        densities = self.densities
        centre = self.density(0) if 0 in self.sites else 0.0
        reference = centre if centre > 0 else float(np.max(densities))
        normalized = densities / reference if reference > 0 else np.zeros_like(densities)
        return pd.DataFrame({"site": self.sites, "N": densities, "N_over_N0": normalized})

    def g1_frame(self) -> pd.DataFrame:
        """Long-format coherence map with columns j, l, re_g1, im_g1."""
        coherence = self.coherence
        j, l = np.meshgrid(coherence.sites, coherence.sites, indexing="ij")
        return pd.DataFrame(
            {
                "j": j.ravel(),
                "l": l.ravel(),
                "re_g1": np.real(coherence.values).ravel(),
                "im_g1": np.imag(coherence.values).ravel(),
            }
        )

    def summary(self) -> dict[str, Any]:
        total = float(np.sum(self.densities))
        return {
            "parameters": self.parameters,
            "diagnostics": {
                "residual": self.residual,
                "trace_error": self.trace_error,
                "min_eigenvalue": self.min_eigenvalue,
                "method": self.method,
            },
            "f": nonlocal_fraction(self) if total > ZERO_TOTAL else None,
        }


def correlation_matrix(
    rho: NDArray[np.complex128], lowering: list[SparseMatrix]
) -> NDArray[np.complex128]:
    """C_ab = Tr(rho W^dag_a W_b)."""
    n = len(lowering)
    correlations = np.zeros((n, n), dtype=np.complex128)
    for a in range(n):
        raised = lowering[a].conj().T
        for b in range(n):
            correlations[a, b] = (raised @ lowering[b]).multiply(rho.T).sum()
    return correlations


def steady_state(
    problem: TruncatedLindbladProblem,
    liouvillian: Optional[SparseMatrix] = None,
    svd_max_dim: Optional[int] = None,
) -> DenseSteadyState:
    """
    Unique steady state of the chain.

    Args:
        problem: Chain definition
        liouvillian: Prebuilt Liouvillian (built from the problem if omitted)
        svd_max_dim: Largest Liouvillian dimension solved by dense SVD
            (defaults to settings.dense_svd_max_dim)

    Returns:
        DenseSteadyState

    Raises:
        DegenerateSteadyState: If the steady state is not unique
        ResidualTooLarge: If L(rho) exceeds 1e-8 times the largest Liouvillian entry
        DimensionTooLarge: If the chain is too long to build
    """
    generator = build_liouvillian(problem) if liouvillian is None else liouvillian
    solution = null_state(generator, problem.dim, svd_max_dim=svd_max_dim)
    scale = max(1.0, float(np.max(np.abs(generator.data)))) if generator.nnz else 1.0
    if solution.residual > RESIDUAL_TOL * scale:
        raise ResidualTooLarge(
            f"Steady-state residual {solution.residual:.3e} exceeds "
            f"{RESIDUAL_TOL:.0e} x Liouvillian scale {scale:.3g}",
            residual=solution.residual,
        )
    correlations = correlation_matrix(solution.rho, lowering_operators(problem.n_sites))

    couplings = problem.couplings
    return DenseSteadyState(
        rho=solution.rho,
        residual=solution.residual,
        sites=problem.sites,
        correlations=correlations,
        method=solution.method,
        parameters={
            "n_sites": problem.n_sites,
            "kappa": problem.kernel.kappa,
            "gamma_ref": problem.kernel.gamma_ref,
            "kernel_cutoff": problem.kernel.cutoff,
            "detuning": problem.drive.detuning,
            "U0": couplings.U0,
            "U1": couplings.U1,
            "U2": couplings.U2,
            "U3": couplings.U3,
            "dissipator": problem.dissipator,
        },
    )


def nonlocal_fraction(state: DenseSteadyState) -> float:
    """
    Fraction of excitations outside the driven site, f = sum_{i != 0} N_i / sum_i N_i.

    Raises:
        ZeroTotalDensity: If the chain is empty
    """
    densities = state.densities
    total = float(np.sum(densities))
    if total <= ZERO_TOTAL:
        raise ZeroTotalDensity(f"Total density {total:.3e} is zero; f is undefined")
    driven = state.density(0) if 0 in state.sites else 0.0
    return float(np.clip((total - driven) / total, 0.0, 1.0))
