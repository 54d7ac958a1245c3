"""Sparse Liouvillian assembly and steady-state null vectors.

Density matrices are vectorized row-major (``rho.ravel()``), so
vec(A rho B) = (A kron B^T) vec(rho).
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg
from numpy.typing import NDArray

from src.errors import DegenerateSteadyState
from src.utils.config import get_settings
from src.utils.logging import setup_logging

logger = setup_logging(__name__)

SparseMatrix = scipy.sparse.csr_matrix
Operator = Union[scipy.sparse.spmatrix, NDArray[np.complex128]]

DEGENERACY_GAP = 1e-12
INVERSE_ITERATIONS = 8


def _csr(op: Operator) -> SparseMatrix:
    return scipy.sparse.csr_matrix(op, dtype=np.complex128)


def sandwich(left: Operator, right: Operator) -> SparseMatrix:
    """Superoperator of rho -> left @ rho @ right."""
    return scipy.sparse.kron(_csr(left), _csr(right).T, format="csr")


def commutator(hamiltonian: Operator) -> SparseMatrix:
    """Superoperator of rho -> -i [H, rho]."""
    h = _csr(hamiltonian)
    identity = scipy.sparse.identity(h.shape[0], dtype=np.complex128, format="csr")
    return -1j * (sandwich(h, identity) - sandwich(identity, h))


def dissipator(
    jump: Operator, partner: Optional[Operator] = None, rate: float = 1.0
) -> SparseMatrix:
    """
    Superoperator of rho -> rate * (2 L rho M^dag - {M^dag L, rho}).

    With ``partner`` omitted M = L, the diagonal Lindblad form.
    """
    l_op = _csr(jump)
    m_op = l_op if partner is None else _csr(partner)
    identity = scipy.sparse.identity(l_op.shape[0], dtype=np.complex128, format="csr")
    product = m_op.conj().T @ l_op
    return rate * (
        2.0 * sandwich(l_op, m_op.conj().T)
        - sandwich(product, identity)
        - sandwich(identity, product)
    )


def liouvillian(
    hamiltonian: Operator, jumps: Iterable[tuple[float, Operator]] = ()
) -> SparseMatrix:
    """Generator -i[H, .] + sum_n rate_n D[L_n] in CSR form."""
    generator = commutator(hamiltonian)
    for rate, jump in jumps:
        if rate != 0.0:
            generator = generator + dissipator(jump, rate=rate)
    return generator.tocsr()


def trace_functional(dim: int) -> NDArray[np.complex128]:
    """Row vector t with t . vec(rho) = Tr(rho)."""
    return np.asarray(np.eye(dim, dtype=np.complex128).ravel())


@dataclass(frozen=True)
class NullState:
    """Unit-trace Hermitian null vector of a Liouvillian with solve diagnostics."""

    rho: NDArray[np.complex128]
    residual: float
    method: str
    gap: float = float("nan")


def _dense_null_vector(generator: SparseMatrix) -> tuple[NDArray[np.complex128], float]:
    # Right singular vector of the smallest singular value: ground state of L^dag L
    _, singular, vh = scipy.linalg.svd(generator.toarray())
    squares = np.sort(singular**2)
    if squares[1] - squares[0] <= DEGENERACY_GAP:
        raise DegenerateSteadyState(
            f"Two smallest eigenvalues of L^dag L are {squares[0]:.3e} and {squares[1]:.3e}",
            eigenvalues=(float(squares[0]), float(squares[1])),
        )
    return vh[-1].conj(), float(squares[1] - squares[0])


def _smallest_singular_value(
    factor: scipy.sparse.linalg.SuperLU, size: int, iterations: int = INVERSE_ITERATIONS
) -> float:
    # Inverse iteration on (A^H A)^-1 through the existing LU factors; the estimate
    # approaches sigma_min from above, and a singular A drives it to zero at once
    rng = np.random.default_rng(0)
    vector = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    vector /= np.linalg.norm(vector)
    growth = 0.0
    for _ in range(iterations):
        image = factor.solve(factor.solve(vector, trans="H"))
        growth = float(np.linalg.norm(image))
        if not np.isfinite(growth) or growth == 0.0:
            return 0.0
        vector = image / growth
    return float(1.0 / np.sqrt(growth))


def _sparse_null_vector(
    generator: SparseMatrix, dim: int
) -> tuple[NDArray[np.complex128], float]:
    # Add the trace functional to the first row: rows stay dependent only through L
    weight = float(np.max(np.abs(generator.data))) if generator.nnz else 1.0
    border = scipy.sparse.csr_matrix(
        (weight * trace_functional(dim)[None, :]), dtype=np.complex128
    )
    first_row = scipy.sparse.csr_matrix(
        ([1.0], ([0], [0])), shape=(generator.shape[0], 1), dtype=np.complex128
    )
    augmented = (generator + first_row @ border).tocsc()
    rhs = np.zeros(generator.shape[0], dtype=np.complex128)
    rhs[0] = weight
    try:
        factor = scipy.sparse.linalg.splu(augmented)
    except RuntimeError as e:
        raise DegenerateSteadyState(
            f"Trace-augmented Liouvillian is singular: {e}", eigenvalues=(0.0, 0.0)
        ) from e

    # A second null vector of L leaves the bordered matrix singular
    sigma = _smallest_singular_value(factor, generator.shape[0])
    if sigma**2 <= DEGENERACY_GAP:
        raise DegenerateSteadyState(
            f"Trace-augmented Liouvillian is numerically singular "
            f"(smallest singular value about {sigma:.3e})",
            eigenvalues=(0.0, float(sigma**2)),
        )
    return np.asarray(factor.solve(rhs)), float(sigma**2)


def null_state(
    generator: SparseMatrix, dim: int, svd_max_dim: Optional[int] = None
) -> NullState:
    """
    Steady state rho with L vec(rho) = 0 and Tr rho = 1.

    Liouvillians up to ``svd_max_dim`` are solved by a dense SVD (the ground
    state of L^dag L); larger ones by sparse LU on the trace-augmented system.
    The vector is Hermitized and then trace-normalized.

    Args:
        generator: Liouvillian of shape (dim^2, dim^2)
        dim: Hilbert-space dimension
        svd_max_dim: Largest Liouvillian dimension for the dense path
            (defaults to settings.dense_svd_max_dim)

    Returns:
        NullState

    Raises:
        DegenerateSteadyState: If the steady state is not unique
    """
    svd_max_dim = get_settings().dense_svd_max_dim if svd_max_dim is None else svd_max_dim
    if generator.shape != (dim * dim, dim * dim):
        raise ValueError(f"Liouvillian shape {generator.shape} does not match dim {dim}")

    gap = float("nan")
    if generator.shape[0] <= svd_max_dim:
        vector, gap = _dense_null_vector(generator)
        method = "svd"
    else:
        vector, gap = _sparse_null_vector(generator, dim)
        method = "sparse_lu"

    rho = vector.reshape(dim, dim)
    trace = np.trace(rho)
    if abs(trace) == 0.0:
        raise DegenerateSteadyState("Null vector has zero trace")
    # Fix the arbitrary phase before Hermitizing
    rho = rho / trace
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real

    residual = float(np.linalg.norm(generator @ rho.ravel()))
    logger.info(
        f"Steady state of a {generator.shape[0]}-dimensional Liouvillian via {method}, "
        f"residual {residual:.3e}"
    )
    return NullState(rho=np.asarray(rho), residual=residual, method=method, gap=gap)
