"""Quadrature helpers for Brillouin-zone integrals."""

from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

from src.errors import InvalidParameter, QuadratureNotConverged
from src.utils.config import get_settings
from src.utils.logging import setup_logging

logger = setup_logging(__name__)

Integrand = Callable[[NDArray[np.float64]], NDArray[np.float64]]


def periodic_grid(n_points: int) -> NDArray[np.float64]:
    """Uniform grid of ``n_points`` momenta covering [-pi, pi) once."""
    if n_points < 2:
        raise InvalidParameter(f"n_points must be at least 2, got {n_points}")
    return -np.pi + 2.0 * np.pi * np.arange(n_points) / n_points


def zone_average(
    integrand: Integrand,
    n_points: Optional[int] = None,
    tol: Optional[float] = None,
) -> NDArray[np.float64]:
    """
    Evaluate (1/2pi) * integral over [-pi, pi] of a 2pi-periodic integrand.

    The composite trapezoid rule on a periodic grid converges geometrically for
    analytic integrands; the grid is doubled once and the two results compared.

    Args:
        integrand: Maps a 1-D momentum grid to values with the momentum on the last axis
        n_points: Base grid size (defaults to settings.quadrature_points)
        tol: Absolute tolerance for the doubling check (defaults to settings.quadrature_tol)

    Returns:
        Array of zone averages (momentum axis reduced)

    Raises:
        QuadratureNotConverged: If doubling the grid changes any value by more than tol
    """
    settings = get_settings()
    n_points = n_points or settings.quadrature_points
    tol = settings.quadrature_tol if tol is None else tol

    coarse = np.mean(integrand(periodic_grid(n_points)), axis=-1)
    fine = np.mean(integrand(periodic_grid(2 * n_points)), axis=-1)

    change = float(np.max(np.abs(fine - coarse))) if np.size(fine) else 0.0
    logger.debug(f"Zone average with {n_points} points, doubling change {change:.3e}")
    if change > tol:
        raise QuadratureNotConverged(
            f"Doubling {n_points} -> {2 * n_points} points changed the integral by {change:.3e}",
            change=change,
        )
    return np.asarray(fine, dtype=np.float64)


def gauss_legendre(
    n_points: int, lower: float | NDArray[np.float64], upper: float | NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Gauss-Legendre nodes and weights mapped onto [lower, upper].

    ``lower`` and ``upper`` may be arrays, in which case one set of nodes is
    produced per interval (shape ``lower.shape + (n_points,)``).
    """
    x, w = np.polynomial.legendre.leggauss(n_points)
    lo = np.asarray(lower, dtype=np.float64)[..., None]
    hi = np.asarray(upper, dtype=np.float64)[..., None]
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x + 1.0)
    weights = half * w
    return nodes, weights
