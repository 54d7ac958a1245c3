"""Tests for Brillouin-zone quadrature."""

import numpy as np
import pytest

from src.errors import QuadratureNotConverged
from src.utils.quadrature import gauss_legendre, periodic_grid, zone_average


def test_periodic_grid_covers_zone_once():
    """Test the grid starts at -pi and stops short of pi."""
    grid = periodic_grid(8)
    assert grid[0] == pytest.approx(-np.pi)
    assert grid[-1] == pytest.approx(np.pi - 2.0 * np.pi / 8)
    with pytest.raises(ValueError):
        periodic_grid(1)


def test_zone_average_of_trigonometric_polynomial():
    """Test averages of cos^2 k and cos 3k."""
    assert zone_average(lambda k: np.cos(k) ** 2, n_points=64) == pytest.approx(0.5)
    values = zone_average(lambda k: np.cos(np.outer([0, 3], k)), n_points=64)
    assert values == pytest.approx([1.0, 0.0], abs=1e-14)


def test_zone_average_refinement_failure():
    """Test QuadratureNotConverged for a kinked integrand on a coarse grid."""
    with pytest.raises(QuadratureNotConverged) as excinfo:
        zone_average(np.abs, n_points=16, tol=1e-8)
    assert excinfo.value.change > 1e-8


def test_gauss_legendre_polynomial_exactness():
    """Test n nodes integrate polynomials of degree 2n - 1 exactly."""
    nodes, weights = gauss_legendre(4, 0.0, 2.0)
    assert np.sum(weights * nodes**7) == pytest.approx(2.0**8 / 8.0)


def test_gauss_legendre_per_interval():
    """Test array bounds give one rule per interval."""
    nodes, weights = gauss_legendre(3, np.array([0.0, 1.0]), np.array([1.0, 3.0]))
    assert nodes.shape == (2, 3)
    assert np.sum(weights, axis=-1) == pytest.approx([1.0, 2.0])
