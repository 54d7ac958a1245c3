"""Tests for the single driven Kerr site."""

import numpy as np
import pytest

from src.errors import FockCutoffInsufficient
from src.interactions.kerr import (
    annihilation,
    hypergeometric_0f2,
    kerr_correlation_dense,
    kerr_correlation_exact,
    kerr_steady_state,
    minimum_onsite_interaction,
    truncation_threshold,
)


def test_annihilation_operator():
    """Test a |n> = sqrt(n) |n - 1> on the truncated Fock space."""
    a = annihilation(3).toarray()
    assert a.shape == (4, 4)
    assert a[1, 2] == pytest.approx(np.sqrt(2.0))
    with pytest.raises(ValueError):
        annihilation(0)


def test_steady_state_is_a_density_matrix():
    """Test the Kerr steady state is Hermitian, unit-trace and positive."""
    rho = kerr_steady_state(U0=0.5, gamma0=1.0, omega=1.0, cutoff=8)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(rho, rho.conj().T)
    assert np.linalg.eigvalsh(rho)[0] >= -1e-8


def test_linear_cavity_occupation():
    """Test U0 = 0 gives the coherent-state occupation |Omega|^2 / (4 gamma0^2)."""
    value = kerr_correlation_dense(0.0, 1.0, 0.6, cutoff=12, order=1)
    assert value == pytest.approx(0.09, rel=1e-8)


def test_threshold_converges_across_cutoffs():
    """Test cutoffs 8 and 16 agree at U0 = 0.5."""
    coarse = kerr_correlation_dense(0.5, 1.0, 1.0, cutoff=8)
    fine = kerr_correlation_dense(0.5, 1.0, 1.0, cutoff=16)
    assert coarse == pytest.approx(fine, rel=1e-2)
    assert truncation_threshold(0.5, 1.0, 1.0) == pytest.approx(fine, rel=1e-2)


@pytest.mark.parametrize("U0", [0.5, 2.0])
@pytest.mark.parametrize("detuning", [0.0, 0.7])
def test_closed_form_matches_dense_solve(U0, detuning):
    """Test the complex-P solution against the dense steady state."""
    dense = kerr_correlation_dense(U0, 1.0, 1.0, cutoff=16, detuning=detuning)
    exact = kerr_correlation_exact(U0, 1.0, 1.0, detuning=detuning)
    assert exact == pytest.approx(dense, abs=1e-6)


def test_closed_form_mean_occupation():
    """Test the first-order closed form against the dense solve."""
    dense = kerr_correlation_dense(1.0, 1.0, 1.5, cutoff=20, order=1)
    assert kerr_correlation_exact(1.0, 1.0, 1.5, order=1) == pytest.approx(dense, abs=1e-6)


def test_weak_drive_limit():
    """Test <a^dag a^dag a a> -> F^4 / (gamma0^2 (U0^2 + gamma0^2)) with F = Omega / 2."""
    force = 0.025
    expected = force**4 / (1.0 * (2.0**2 + 1.0))
    assert kerr_correlation_exact(2.0, 1.0, 2.0 * force) == pytest.approx(expected, rel=1e-2)


def test_double_occupancy_decreases_with_interaction():
    """Test the truncation error falls monotonically as U0 grows."""
    values = [truncation_threshold(U0, 1.0, 1.0) for U0 in (0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_minimum_onsite_interaction_hits_bound():
    """Test the root-found U0 sits exactly on the requested bound."""
    u_min = minimum_onsite_interaction(gamma0=1.0, omega=1.0, bound=1e-3)
    assert kerr_correlation_exact(u_min, 1.0, 1.0) == pytest.approx(1e-3, rel=1e-6)
    assert kerr_correlation_exact(2.0 * u_min, 1.0, 1.0) < 1e-3


def test_minimum_onsite_interaction_unbracketed():
    """Test a bound already met at the lower bracket is rejected."""
    with pytest.raises(ValueError, match="already below"):
        minimum_onsite_interaction(gamma0=1.0, omega=0.01, bound=0.5)


def test_threshold_input_validation():
    """Test invalid loss, drive and interaction are rejected."""
    with pytest.raises(ValueError, match="gamma0"):
        truncation_threshold(1.0, 0.0, 1.0)
    with pytest.raises(ValueError, match="omega"):
        truncation_threshold(1.0, 1.0, 0.0)
    with pytest.raises(ValueError, match="U0"):
        truncation_threshold(-1.0, 1.0, 1.0)


def test_unconverged_cutoff():
    """Test FockCutoffInsufficient when doubling keeps changing the value."""
    with pytest.raises(FockCutoffInsufficient):
        truncation_threshold(0.0, 1.0, 8.0, fock_cutoff=2, max_doublings=1)


def test_hypergeometric_series_at_zero():
    """Test 0F2(; a, b; 0) = 1."""
    assert hypergeometric_0f2(1.5 + 0.2j, 1.5 - 0.2j, 0.0) == 1.0
