"""Tests for the end-to-end Gaussian steady state."""

import math

import numpy as np
import pytest

from src.dissipation.kernel import sawtooth_kernel
from src.errors import UnstablePump
from src.gaussian.moments import DriveSpec
from src.gaussian.steady_state import solve_steady_state


def exact_decay_length(kappa: float) -> float:
    # Resolvent of the sawtooth kernel symbol decays as exp(-arccosh(1 + kappa) |j|)
    return 1.0 / (2.0 * math.acosh(1.0 + kappa))


@pytest.fixture(scope="module")
def xi_by_kappa() -> dict[float, float]:
    kappas = [0.1, 0.3, 0.5, 0.7, 0.9, 0.95]
    reports = {
        k: solve_steady_state(
            sawtooth_kernel(1.0, k), DriveSpec.single_site(1.0), full_correlations=True
        )
        for k in kappas
    }
    return {k: report.xi[4] for k, report in reports.items()}


def test_decay_length_matches_resolvent(xi_by_kappa):
    """Test xi_4 against the analytic decay of the kernel resolvent."""
    for kappa, xi in xi_by_kappa.items():
        assert xi == pytest.approx(exact_decay_length(kappa), rel=1e-3)


def test_decay_length_approaches_direct_limit(xi_by_kappa):
    """Test xi_4 at kappa = 0.95 lies within 10% of 0.38."""
    assert xi_by_kappa[0.95] == pytest.approx(0.38, rel=0.1)


def test_decay_length_decreases_with_kappa(xi_by_kappa):
    """Test xi_4 falls monotonically and by more than half over the sweep."""
    ordered = [xi_by_kappa[k] for k in sorted(xi_by_kappa)]
    assert all(a > b for a, b in zip(ordered, ordered[1:]))
    assert xi_by_kappa[0.1] > 2.0 * xi_by_kappa[0.9]


def test_log10_convention_scales_decay_length():
    """Test the base-10 decay length is ln 10 times the natural one."""
    kernel = sawtooth_kernel(1.0, 0.5)
    natural = solve_steady_state(kernel, DriveSpec.single_site(1.0), half_width=20)
    base10 = solve_steady_state(
        kernel, DriveSpec.single_site(1.0), half_width=20, convention="log10"
    )
    assert base10.xi[3] == pytest.approx(natural.xi[3] * math.log(10.0), rel=1e-12)


def test_coherent_drive_alternating_coherence():
    """Test g1(j, l) = (-1)^|j - l| under a coherent drive."""
    report = solve_steady_state(
        sawtooth_kernel(1.0, 0.2), DriveSpec.single_site(1.0), full_correlations=True
    )
    for j in range(-8, 9):
        for l in range(-8, 9):
            assert report.coherence.at(j, l) == pytest.approx((-1) ** abs(j - l), abs=1e-6)


def test_incoherent_pump_suppresses_coherence_near_pump(weak_pump):
    """Test coherence with the pumped site is weaker than between distant neighbours."""
    report = solve_steady_state(sawtooth_kernel(1.0, 0.1), weak_pump, full_correlations=True)
    near_pump = np.mean([abs(report.coherence.at(0, l)) for l in range(-6, 7) if l != 0])
    neighbours = np.mean([abs(report.coherence.at(j, j + 1)) for j in range(2, 7)])
    assert near_pump < neighbours


def test_report_frames_and_summary(kernel_kappa_01, coherent_drive):
    """Test the report exposes profile, coherence and summary views."""
    report = solve_steady_state(kernel_kappa_01, coherent_drive, half_width=10)
    frame = report.density_frame()
    assert list(frame.columns[:3]) == ["site", "N", "N_over_N0"]
    assert {"n_A", "n_B"} <= set(frame.columns)
    assert frame.loc[frame["site"] == 0, "N_over_N0"].item() == pytest.approx(1.0)
    assert report.density(0) == report.density_map()[0]
    summary = report.summary()
    assert summary["decay_convention"] == "natural"
    assert summary["parameters"]["kappa"] == 0.1
    assert summary["diagnostics"]["spectral_abscissa"] < 0.0


def test_profile_symmetric_about_drive(kernel_kappa_01, coherent_drive):
    """Test densities are mirror-symmetric about the driven site."""
    report = solve_steady_state(kernel_kappa_01, coherent_drive, half_width=10)
    assert np.allclose(report.densities, report.densities[::-1], rtol=1e-10)


def test_strong_pump_has_no_steady_state(kernel_kappa_01):
    """Test UnstablePump for a pump above threshold."""
    with pytest.raises(UnstablePump):
        solve_steady_state(kernel_kappa_01, DriveSpec.site_pump(50.0), half_width=10)
