"""First and second moment equations of the quadratic flat-band model.

Wannier modes W_i live on sites i in [-M, M]. With loss kernel Gamma,
incoherent gain kernel G and detuning Delta the moments obey

    d<W>/dt = s - A <W>,            A = Gamma - G + i Delta,  s = -(i/2) conj(Omega)
    dC/dt   = S + 2G - (K C + C K), K = Gamma - G,  C_ab = <W_a^dag W_b>

with S_ab = (i/2)(Omega_a <W_b> - conj(Omega_b) conj(<W_a>)).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.dissipation.kernel import DissipationKernel
from src.errors import InvalidParameter, SingularDrift, UnstablePump
from src.lattice.wannier import Sublattice, WannierTable, get_sawtooth_table
from src.utils.logging import setup_logging

logger = setup_logging(__name__)

ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]

SINGULAR_CONDITION = 1e12


class DriveSpec(BaseModel):
    """Coherent Wannier-mode drives, incoherent site-basis pumps and a uniform detuning."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    coherent: dict[int, complex] = Field(
        default_factory=dict, description="Wannier site -> drive amplitude Omega_W"
    )
    incoherent: dict[tuple[Sublattice, int], float] = Field(
        default_factory=dict, description="(sublattice, cell) -> pump rate P"
    )
    detuning: float = Field(default=0.0, description="Drive detuning from the flat band")

    @field_validator("incoherent")
    @classmethod
    def _check_pump_rates(
        cls, value: dict[tuple[Sublattice, int], float]
    ) -> dict[tuple[Sublattice, int], float]:
        for key, rate in value.items():
            if rate < 0:
                raise ValueError(f"pump rate for {key} must be non-negative, got {rate}")
        return value

    @classmethod
    def single_site(cls, omega: complex, site: int = 0, detuning: float = 0.0) -> "DriveSpec":
        return cls(coherent={site: omega}, detuning=detuning)

    @classmethod
    def site_pump(cls, rate: float, sublattice: Sublattice = "B", cell: int = 0) -> "DriveSpec":
        return cls(incoherent={(sublattice, cell): rate})


@dataclass(frozen=True)
class DriftProblem:
    """Matrices of the moment equations on a finite window."""

    sites: NDArray[np.int64]
    loss: FloatArray
    gain: FloatArray
    drift: ComplexArray
    source: ComplexArray
    omega: ComplexArray
    detuning: float = 0.0

    @property
    def size(self) -> int:
        return int(len(self.sites))

    @property
    def relaxation(self) -> FloatArray:
        """Gain-shifted loss K = Gamma - G."""
        return np.asarray(self.loss - self.gain)


@dataclass(frozen=True)
class FirstMoments:
    """Steady-state amplitudes <W_i> with solve diagnostics."""

    values: ComplexArray
    condition_number: float
    residual: float


@dataclass(frozen=True)
class MomentState:
    """First and second moments on the sites of a drift problem."""

    sites: NDArray[np.int64]
    first: ComplexArray
    second: ComplexArray
    corr_range: Optional[int] = None

    @property
    def densities(self) -> FloatArray:
        return np.asarray(np.real(np.diag(self.second)))


def gain_kernel(
    drive: DriveSpec, table: WannierTable, sites: NDArray[np.int64]
) -> FloatArray:
    """G_jk = sum over pumped (X, i) of P_{X,i} w_X(r_i - r_j) w_X(r_i - r_k)."""
    gain = np.zeros((len(sites), len(sites)))
    for (sublattice, cell), rate in drive.incoherent.items():
        if rate == 0.0:
            continue
        column = table.matrix(sublattice, np.array([cell]), sites)[0]
        gain += rate * np.outer(column, column)
    return gain


def build_drift(
    kernel: DissipationKernel,
    drive: DriveSpec,
    half_width: int,
    table: Optional[WannierTable] = None,
) -> DriftProblem:
    """
    Assemble the drift matrix and source vector on sites -M..M.

    Args:
        kernel: Loss kernel gamma_l
        drive: Coherent drives, incoherent pumps and detuning
        half_width: M, so the window holds 2M + 1 Wannier modes
        table: Wannier table for transforming site pumps (sawtooth table by default)

    Returns:
        DriftProblem with A = Gamma - G + i Delta and s = -(i/2) conj(Omega)

    Raises:
        InvalidParameter: If a drive acts outside the window
    """
    if half_width < 0:
        raise InvalidParameter(f"half_width must be non-negative, got {half_width}")
    sites = np.arange(-half_width, half_width + 1)
    size = len(sites)
    if size < 4 * kernel.cutoff:
        logger.warning(
            f"Window of {size} sites is short for kernel cutoff {kernel.cutoff}; "
            "boundary effects may be visible"
        )

    omega = np.zeros(size, dtype=np.complex128)
    for site, amplitude in drive.coherent.items():
        if abs(site) > half_width:
            raise InvalidParameter(
                f"coherent drive at site {site} lies outside [-{half_width}, {half_width}]"
            )
        omega[site + half_width] = amplitude

    loss = kernel.toeplitz(size)
    if drive.incoherent:
        if table is None:
            if kernel.lattice_kind != "sawtooth":
                raise InvalidParameter("a Wannier table is required to place pumps on a Lieb chain")
            table = get_sawtooth_table()
        gain = gain_kernel(drive, table, sites)
    else:
        gain = np.zeros_like(loss)

    drift = (loss - gain).astype(np.complex128) + 1j * drive.detuning * np.eye(size)
    source = -0.5j * np.conj(omega)
    logger.debug(f"Built drift on {size} sites, cutoff {kernel.cutoff}")
    return DriftProblem(
        sites=sites,
        loss=loss,
        gain=gain,
        drift=drift,
        source=source,
        omega=omega,
        detuning=drive.detuning,
    )


def solve_first_moments(drift: ComplexArray, source: ComplexArray) -> FirstMoments:
    """
    Solve A <W> = s by LU decomposition.

    Raises:
        SingularDrift: If A is singular or its condition number exceeds 1e12
    """
    condition = float(np.linalg.cond(drift))
    if not np.isfinite(condition) or condition > SINGULAR_CONDITION:
        raise SingularDrift(
            f"Drift matrix is numerically singular (condition number {condition:.3e})",
            condition_number=condition,
        )
    try:
        values = scipy.linalg.lu_solve(scipy.linalg.lu_factor(drift), source)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SingularDrift(f"Drift solve failed: {e}", condition_number=condition) from e

    residual = float(np.linalg.norm(drift @ values - source))
    scale = float(np.linalg.norm(source))
    if residual > 1e-10 * max(scale, 1e-300):
        logger.warning(f"First-moment residual {residual:.3e} exceeds 1e-10 * |s|")
    logger.info(f"Solved first moments, condition number {condition:.3e}")
    return FirstMoments(values=values, condition_number=condition, residual=residual)


def stability_check(loss: FloatArray, gain: FloatArray) -> float:
    """Spectral abscissa of -(Gamma - G); a steady state needs it negative."""
    relaxation = np.asarray(loss - gain)
    relaxation = 0.5 * (relaxation + relaxation.T)
    return float(-scipy.linalg.eigvalsh(relaxation)[0])


def second_moment_source(problem: DriftProblem, first: ComplexArray) -> ComplexArray:
    """Right-hand side Q = S + 2G of K C + C K = Q."""
    omega = problem.omega
    coherent = 0.5j * (np.outer(omega, first) - np.outer(np.conj(first), np.conj(omega)))
    return np.asarray(coherent + 2.0 * problem.gain)


def _banded_lyapunov(
    relaxation: FloatArray, rhs: ComplexArray, corr_range: int
) -> ComplexArray:
    # Unknowns C_ab with |a - b| <= corr_range; the rest are held at zero
    size = relaxation.shape[0]
    sparse_k = scipy.sparse.csr_matrix(relaxation)
    identity = scipy.sparse.identity(size, format="csr")
    operator = scipy.sparse.kron(sparse_k, identity) + scipy.sparse.kron(identity, sparse_k)
    operator = operator.tocsr().astype(np.complex128)

    rows, cols = np.indices((size, size))
    band = (np.abs(rows - cols) <= corr_range).ravel()
    index = np.flatnonzero(band)
    reduced = operator[index][:, index].tocsc()
    solution = scipy.sparse.linalg.spsolve(reduced, rhs.ravel()[index].astype(np.complex128))

    second = np.zeros(size * size, dtype=np.complex128)
    second[index] = solution
    return second.reshape(size, size)


def solve_second_moments(
    problem: DriftProblem, first: ComplexArray, corr_range: Optional[int] = None
) -> ComplexArray:
    """
    Steady-state correlations C_ab = <W_a^dag W_b>.

    Args:
        problem: Drift problem (loss, gain, drives)
        first: Steady-state first moments
        corr_range: Keep only |a - b| <= corr_range (None keeps every correlation)

    Returns:
        Hermitian correlation matrix

    Raises:
        UnstablePump: If gain outweighs loss somewhere in the window
    """
    abscissa = stability_check(problem.loss, problem.gain)
    if abscissa >= 0.0:
        raise UnstablePump(
            f"Gain-shifted drift has spectral abscissa {abscissa:.3e} >= 0", abscissa=abscissa
        )

    relaxation = problem.relaxation
    rhs = second_moment_source(problem, first)
    if corr_range is None or corr_range >= problem.size - 1:
        second = scipy.linalg.solve_continuous_lyapunov(relaxation, rhs)
    else:
        second = _banded_lyapunov(relaxation, rhs, corr_range)

    second = 0.5 * (second + second.conj().T)
    logger.info(
        f"Solved second moments on {problem.size} sites "
        f"(corr_range={'full' if corr_range is None else corr_range})"
    )
    return np.asarray(second)


def evolve_moments(
    problem: DriftProblem, t_final: float, dt: float = 0.05
) -> MomentState:
    """
    Integrate the moment equations from the vacuum with fixed-step RK4.

    Args:
        problem: Drift problem
        t_final: Total evolution time
        dt: Step size

    Returns:
        MomentState at t_final (full correlation matrix)
    """
    if dt <= 0 or t_final < 0:
        raise InvalidParameter("dt must be positive and t_final non-negative")

    relaxation = problem.relaxation
    drift = problem.drift
    source = problem.source
    omega = problem.omega
    injection = 2.0 * problem.gain

    def rhs(first: ComplexArray, second: ComplexArray) -> tuple[ComplexArray, ComplexArray]:
        coherent = 0.5j * (np.outer(omega, first) - np.outer(np.conj(first), np.conj(omega)))
        d_first = source - drift @ first
        d_second = coherent + injection - (relaxation @ second + second @ relaxation)
        return d_first, d_second

    first = np.zeros(problem.size, dtype=np.complex128)
    second = np.zeros((problem.size, problem.size), dtype=np.complex128)
    n_steps = int(np.ceil(t_final / dt))
    step = t_final / n_steps if n_steps else 0.0

    for _ in range(n_steps):
        k1 = rhs(first, second)
        k2 = rhs(first + 0.5 * step * k1[0], second + 0.5 * step * k1[1])
        k3 = rhs(first + 0.5 * step * k2[0], second + 0.5 * step * k2[1])
        k4 = rhs(first + step * k3[0], second + step * k3[1])
        first = first + step / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        second = second + step / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])

    logger.debug(f"Evolved moments for {n_steps} RK4 steps to t={t_final}")
    return MomentState(sites=problem.sites, first=first, second=second)
