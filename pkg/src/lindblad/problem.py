"""Hard-core Wannier chain with the truncated interaction Hamiltonian.

Each Wannier site holds at most one excitation, so W_i acts as a two-level
lowering operator. The Hamiltonian is

    H = Delta sum_i n_i + (1/2) sum_i (Omega_i W_i + h.c.)
        + U1 sum_i n_i n_{i+1} + U2 sum_i n_i n_{i+2}
        + U3 sum_i (W^dag_{i-1} n_i W_{i+1} + h.c.)

and the onsite U0 term vanishes identically in this space.
"""

from functools import reduce
from typing import Literal, Optional

import numpy as np
import scipy.sparse
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from src.dissipation.kernel import DissipationKernel, clipped_window
from src.errors import DimensionTooLarge
from src.gaussian.moments import DriveSpec, gain_kernel
from src.interactions.coefficients import TruncatedCouplings
from src.lattice.wannier import WannierTable, get_sawtooth_table
from src.utils.config import get_settings
from src.utils.logging import setup_logging
from src.utils.superoperator import SparseMatrix, commutator, dissipator

logger = setup_logging(__name__)

LOWERING = scipy.sparse.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128))
NO_INTERACTIONS = TruncatedCouplings(U0=0.0, U1=0.0, U2=0.0, U3=0.0)
ROUNDOFF = 1e-14


class TruncatedLindbladProblem(BaseModel):
    """Interacting hard-core chain with a non-local dissipation kernel."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_sites: int = Field(..., ge=1, description="Wannier sites in the chain")
    kernel: DissipationKernel
    drive: DriveSpec = Field(default_factory=DriveSpec)
    couplings: TruncatedCouplings = Field(
        default=NO_INTERACTIONS, description="Interaction strengths in units of gamma_A"
    )
    dissipator: Literal["jumps", "kernel"] = Field(
        default="jumps", description="Clipped jump decomposition or the raw kernel"
    )
    table: Optional[WannierTable] = Field(
        default=None, description="Wannier table for site-basis pumps (sawtooth by default)"
    )

    @property
    def sites(self) -> NDArray[np.int64]:
        """Site labels centred on the driven site 0."""
        return np.arange(self.n_sites) - (self.n_sites - 1) // 2

    @property
    def dim(self) -> int:
        return int(2**self.n_sites)

    def index(self, site: int) -> int:
        position = site + (self.n_sites - 1) // 2
        if not 0 <= position < self.n_sites:
            raise ValueError(f"site {site} is outside the chain {self.sites.tolist()}")
        return int(position)


def lowering_operators(n_sites: int) -> list[SparseMatrix]:
    """Hard-core W_i for each of n_sites sites; site 0 is the leftmost tensor factor."""
    identity = scipy.sparse.identity(2, dtype=np.complex128, format="csr")
    operators = []
    for position in range(n_sites):
        factors = [LOWERING if k == position else identity for k in range(n_sites)]
        operators.append(
            reduce(lambda a, b: scipy.sparse.kron(a, b, format="csr"), factors).tocsr()
        )
    return operators


def hamiltonian(
    problem: TruncatedLindbladProblem, lowering: Optional[list[SparseMatrix]] = None
) -> SparseMatrix:
    """Sparse Hamiltonian of the chain."""
    lowering = lowering_operators(problem.n_sites) if lowering is None else lowering
    raising = [op.conj().T.tocsr() for op in lowering]
    number = [r @ l for r, l in zip(raising, lowering)]
    n = problem.n_sites
    couplings = problem.couplings

    h = scipy.sparse.csr_matrix((problem.dim, problem.dim), dtype=np.complex128)
    if problem.drive.detuning:
        h = h + problem.drive.detuning * reduce(lambda a, b: a + b, number)
    for site, omega in problem.drive.coherent.items():
        i = problem.index(site)
        h = h + 0.5 * (omega * lowering[i] + np.conj(omega) * raising[i])
    for i in range(n):
        if i + 1 < n and couplings.U1:
            h = h + couplings.U1 * (number[i] @ number[i + 1])
        if i + 2 < n and couplings.U2:
            h = h + couplings.U2 * (number[i] @ number[i + 2])
        if 0 < i < n - 1 and couplings.U3:
            hop = raising[i - 1] @ number[i] @ lowering[i + 1]
            h = h + couplings.U3 * (hop + hop.conj().T)
    return h.tocsr()


def _loss_terms(
    problem: TruncatedLindbladProblem, lowering: list[SparseMatrix]
) -> SparseMatrix:
    dim2 = problem.dim**2
    total = scipy.sparse.csr_matrix((dim2, dim2), dtype=np.complex128)
    # Jumps enter pairwise: sum_n r_n D[sum_j c_nj W_j] = sum_jk Gamma_jk D(W_j, W_k)
    # with Gamma the clipped window
    if problem.dissipator == "jumps":
        gamma = clipped_window(problem.kernel, problem.n_sites)
    else:
        gamma = problem.kernel.toeplitz(problem.n_sites)
    negligible = ROUNDOFF * problem.kernel.gamma_ref
    for j in range(problem.n_sites):
        for k in range(problem.n_sites):
            if abs(gamma[j, k]) > negligible:
                total = total + dissipator(lowering[j], lowering[k], rate=float(gamma[j, k]))
    return total


def _pump_terms(
    problem: TruncatedLindbladProblem, lowering: list[SparseMatrix]
) -> Optional[SparseMatrix]:
    if not problem.drive.incoherent:
        return None
    table = problem.table or get_sawtooth_table()
    gain = gain_kernel(problem.drive, table, problem.sites)
    raising = [op.conj().T.tocsr() for op in lowering]
    dim2 = problem.dim**2
    total = scipy.sparse.csr_matrix((dim2, dim2), dtype=np.complex128)
    for j in range(problem.n_sites):
        for k in range(problem.n_sites):
            if gain[j, k] != 0.0:
                total = total + dissipator(raising[j], raising[k], rate=float(gain[j, k]))
    return total


def build_liouvillian(
    problem: TruncatedLindbladProblem, max_sites: Optional[int] = None
) -> SparseMatrix:
    """
    Vectorized Liouvillian of dimension 4^n_sites.

    Args:
        problem: Chain, couplings, drive and kernel
        max_sites: Largest supported chain (defaults to settings.max_dense_sites)

    Returns:
        Sparse Liouvillian acting on row-major vec(rho)

    Raises:
        DimensionTooLarge: If n_sites exceeds max_sites
        KernelNotPositive: If the kernel window has a significantly negative eigenvalue
    """
    max_sites = get_settings().max_dense_sites if max_sites is None else max_sites
    if problem.n_sites > max_sites:
        raise DimensionTooLarge(
            f"{problem.n_sites} sites give a Liouvillian of dimension 4^{problem.n_sites}; "
            f"at most {max_sites} sites are supported"
        )

    lowering = lowering_operators(problem.n_sites)
    generator = commutator(hamiltonian(problem, lowering)) + _loss_terms(problem, lowering)
    pump = _pump_terms(problem, lowering)
    if pump is not None:
        generator = generator + pump

    logger.info(
        f"Built Liouvillian for {problem.n_sites} sites "
        f"({generator.shape[0]}x{generator.shape[0]}, {generator.nnz} non-zeros)"
    )
    return generator.tocsr()
