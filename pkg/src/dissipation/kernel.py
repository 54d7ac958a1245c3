"""Nonlocal dissipation kernels in the flat-band Wannier basis.

For the sawtooth chain the kernel is built from the closed-form overlaps
f_l = (sqrt(3) - 2)^|l| / sqrt(3); for the Lieb chain from the integrals
f_j(a) with a = (2J/g)^2. Both are symmetric Toeplitz kernels that are
positive semidefinite before truncation.
"""

from typing import Literal, Mapping, Optional

import numpy as np
import pandas as pd
import scipy.linalg
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from src.errors import InvalidParameter, KernelNotPositive
from src.lattice.wannier import WannierTable
from src.utils.config import get_settings
from src.utils.logging import setup_logging
from src.utils.quadrature import zone_average

logger = setup_logging(__name__)

SQRT3 = np.sqrt(3.0)
SAWTOOTH_RATIO = SQRT3 - 2.0


class DissipationKernel(BaseModel):
    """Toeplitz dissipation kernel gamma_l, zero beyond the cutoff."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rates: dict[int, float] = Field(..., description="gamma_l for -cutoff <= l <= cutoff")
    kappa: float = Field(..., ge=0.0, description="Ratio of the two sublattice decay rates")
    gamma_ref: float = Field(..., gt=0.0, description="Reference rate (gamma_A or gamma_C)")
    cutoff: int = Field(..., ge=0)
    lattice_kind: Literal["sawtooth", "lieb"] = "sawtooth"
    lieb_a: Optional[float] = None

    def rate(self, l: int) -> float:
        return self.rates.get(l, 0.0) if abs(l) <= self.cutoff else 0.0

    def first_row(self, window_size: int) -> NDArray[np.float64]:
        return np.array([self.rate(l) for l in range(window_size)], dtype=np.float64)

    def toeplitz(self, window_size: int) -> NDArray[np.float64]:
        """Gamma[i, j] = gamma_{i - j} on a window of consecutive sites."""
        if window_size < 1:
            raise InvalidParameter(f"window_size must be positive, got {window_size}")
        return np.asarray(scipy.linalg.toeplitz(self.first_row(window_size)), dtype=np.float64)

    def min_eigenvalue(self, window_size: int) -> float:
        return float(scipy.linalg.eigvalsh(self.toeplitz(window_size))[0])

    def to_frame(self) -> pd.DataFrame:
        """Rates normalized by the reference rate, for l = 0..cutoff."""
        l = np.arange(self.cutoff + 1)
        return pd.DataFrame(
            {"l": l, "gamma_l_over_gamma_A": [self.rate(int(i)) / self.gamma_ref for i in l]}
        )


class JumpOperator(BaseModel):
    """Collective jump L = sum_j coefficients[j] W_j acting with the given rate."""

    model_config = ConfigDict(frozen=True)

    rate: float = Field(..., ge=0.0)
    coefficients: tuple[float, ...]


def f_sawtooth(l: int) -> float:
    """Closed-form overlap f_l = (sqrt(3) - 2)^|l| / sqrt(3)."""
    return float(SAWTOOTH_RATIO ** abs(l) / SQRT3)


def f_numeric(l: int, n_points: Optional[int] = None) -> float:
    """f_l from quadrature of (1/2pi) int cos(kl) / (cos k + 2) dk."""
    return float(zone_average(lambda k: np.cos(l * k) / (np.cos(k) + 2.0), n_points=n_points))


def _symmetric_rates(normalized: Mapping[int, float], gamma_ref: float) -> dict[int, float]:
    rates: dict[int, float] = {}
    for l, value in normalized.items():
        rates[l] = rates[-l] = gamma_ref * value
    return rates


def sawtooth_kernel(
    gamma_A: float, kappa: float, cutoff: Optional[int] = None
) -> DissipationKernel:
    """
    Sawtooth kernel for decay rates gamma_A and gamma_B = kappa * gamma_A.

    gamma_0 / gamma_A = (2 f_0 + f_1) - (1 - kappa) f_0 and
    gamma_l / gamma_A = -(1 - kappa) f_l for 0 < |l| <= cutoff.

    Args:
        gamma_A: Apex-site decay rate (> 0)
        kappa: gamma_B / gamma_A (>= 0)
        cutoff: Largest |l| kept (defaults to settings.gaussian_kernel_cutoff)

    Returns:
        DissipationKernel
    """
    cutoff = get_settings().gaussian_kernel_cutoff if cutoff is None else cutoff
    if gamma_A <= 0:
        raise InvalidParameter(f"gamma_A must be positive, got {gamma_A}")
    if kappa < 0:
        raise InvalidParameter(f"kappa must be non-negative, got {kappa}")
    if cutoff < 1:
        raise InvalidParameter(f"cutoff must be at least 1, got {cutoff}")

    normalized = {0: (2.0 * f_sawtooth(0) + f_sawtooth(1)) - (1.0 - kappa) * f_sawtooth(0)}
    for l in range(1, cutoff + 1):
        normalized[l] = -(1.0 - kappa) * f_sawtooth(l)
    return DissipationKernel(
        rates=_symmetric_rates(normalized, gamma_A),
        kappa=kappa,
        gamma_ref=gamma_A,
        cutoff=cutoff,
        lattice_kind="sawtooth",
    )


def kernel_from_wannier(
    table: WannierTable,
    site_rates: Mapping[str, float],
    cutoff: int,
    kappa: float,
    gamma_ref: float,
) -> DissipationKernel:
    """
    Kernel from the defining overlap sum gamma_l = sum_i sum_X gamma_X w_X(r_i) w_X(r_i - r_l).

    Sums run over the table's truncation window, so accuracy follows r_max.
    """
    normalized: dict[int, float] = {}
    for l in range(cutoff + 1):
        total = 0.0
        for name, rate in site_rates.items():
            w = table.array(name)
            total += rate * float(np.dot(w[l:], w[: len(w) - l])) if l < len(w) else 0.0
        normalized[l] = total / gamma_ref
    return DissipationKernel(
        rates=_symmetric_rates(normalized, gamma_ref),
        kappa=kappa,
        gamma_ref=gamma_ref,
        cutoff=cutoff,
        lattice_kind=table.lattice_kind,
        lieb_a=table.lieb_a,
    )


def lieb_f(j: int, a: float, n_points: Optional[int] = None) -> float:
    """Lieb overlap f_j(a) = (1/2pi) int cos(kj) / (1 + a cos^2(k/2)) dk."""
    if a <= 0:
        raise InvalidParameter(f"a must be positive, got {a}")
    return float(
        zone_average(lambda k: np.cos(j * k) / (1.0 + a * np.cos(k / 2.0) ** 2), n_points=n_points)
    )


def lieb_c_sum(j: int, a: float, n_points: Optional[int] = None) -> float:
    """C-sublattice autocorrelation (1/2pi) int cos(kj) a cos^2(k/2) / (1 + a cos^2(k/2)) dk."""
    if a <= 0:
        raise InvalidParameter(f"a must be positive, got {a}")

    def integrand(k: NDArray[np.float64]) -> NDArray[np.float64]:
        weight = a * np.cos(k / 2.0) ** 2
        return np.cos(j * k) * weight / (1.0 + weight)

    return float(zone_average(integrand, n_points=n_points))


def lieb_kernel(
    gamma_C: float, kappa_prime: float, a: float, cutoff: Optional[int] = None
) -> DissipationKernel:
    """Lieb kernel gamma_j / gamma_C = delta_{j,0} - (1 - kappa') f_j(a)."""
    cutoff = get_settings().gaussian_kernel_cutoff if cutoff is None else cutoff
    if gamma_C <= 0:
        raise InvalidParameter(f"gamma_C must be positive, got {gamma_C}")
    if kappa_prime < 0:
        raise InvalidParameter(f"kappa_prime must be non-negative, got {kappa_prime}")
    normalized = {
        j: (1.0 if j == 0 else 0.0) - (1.0 - kappa_prime) * lieb_f(j, a) for j in range(cutoff + 1)
    }
    return DissipationKernel(
        rates=_symmetric_rates(normalized, gamma_C),
        kappa=kappa_prime,
        gamma_ref=gamma_C,
        cutoff=cutoff,
        lattice_kind="lieb",
        lieb_a=a,
    )


RECONSTRUCTION_TOL = 1e-8


def _clipped_eigensystem(
    kernel: DissipationKernel, window_size: int, tol: float
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    gamma = kernel.toeplitz(window_size)
    eigenvalues, eigenvectors = scipy.linalg.eigh(gamma)

    floor = -tol * kernel.gamma_ref
    if eigenvalues[0] < floor:
        raise KernelNotPositive(
            f"Kernel window of {window_size} sites has eigenvalue {eigenvalues[0]:.3e} "
            f"below {floor:.3e}",
            eigenvalue=float(eigenvalues[0]),
        )

    clipped = np.clip(eigenvalues, 0.0, None)
    if np.any(eigenvalues < 0.0):
        logger.warning(
            f"Clipped {int(np.sum(eigenvalues < 0.0))} negative kernel eigenvalues "
            f"(smallest {eigenvalues[0]:.3e})"
        )
    error = float(np.max(np.abs(eigenvectors @ np.diag(clipped) @ eigenvectors.T - gamma)))
    logger.debug(f"Jump decomposition reconstruction error {error:.3e}")
    if error > RECONSTRUCTION_TOL * max(kernel.gamma_ref, 1.0):
        raise KernelNotPositive(
            f"Clipped kernel window differs from the kernel by {error:.3e} "
            f"(allowed {RECONSTRUCTION_TOL:.0e} relative to gamma_ref)",
            eigenvalue=float(eigenvalues[0]),
        )
    return clipped, eigenvectors


def clipped_window(
    kernel: DissipationKernel, window_size: int, tol: Optional[float] = None
) -> NDArray[np.float64]:
    """
    Toeplitz window rebuilt from its clipped eigendecomposition.

    Unlike jump_decomposition the window may be shorter than the kernel range;
    a finite chain simply keeps the couplings that fit inside it.

    Raises:
        KernelNotPositive: If an eigenvalue is below -tol * gamma_ref
    """
    tol = get_settings().positivity_tol if tol is None else tol
    clipped, eigenvectors = _clipped_eigensystem(kernel, window_size, tol)
    return np.asarray((eigenvectors * clipped) @ eigenvectors.T)


def jump_decomposition(
    kernel: DissipationKernel, window_size: int, tol: Optional[float] = None
) -> list[JumpOperator]:
    """
    Diagonal Lindblad form of the kernel restricted to a window.

    Eigenvalues of the Toeplitz window above -tol * gamma_ref are clipped to
    zero; each eigenpair becomes one jump operator.

    Args:
        kernel: Dissipation kernel
        window_size: Number of consecutive sites (at least 2 * cutoff + 1)
        tol: Relative positivity tolerance (defaults to settings.positivity_tol)

    Returns:
        Jump operators ordered by ascending rate

    Raises:
        InvalidParameter: If the window does not hold the full kernel range
        KernelNotPositive: If an eigenvalue is below -tol * gamma_ref, or the
            clipped window misses the kernel by more than 1e-8 * gamma_ref
    """
    if window_size < 2 * kernel.cutoff + 1:
        raise InvalidParameter(
            f"window_size {window_size} is shorter than 2 * cutoff + 1 = {2 * kernel.cutoff + 1}"
        )
    tol = get_settings().positivity_tol if tol is None else tol
    clipped, eigenvectors = _clipped_eigensystem(kernel, window_size, tol)
    return [
        JumpOperator(rate=float(rate), coefficients=tuple(float(c) for c in vector))
        for rate, vector in zip(clipped, eigenvectors.T)
    ]
