"""Tests for individual experiments."""

import math

import pytest

from src.experiments.catalog import (
    FractionMapParameters,
    InteractingProfileParameters,
    LiebCouplingParameters,
    SingleStateParameters,
    ThresholdMapParameters,
    XiSweepParameters,
    f_vs_kappa_U1,
    g1_map,
    interacting_profile,
    lieb_couplings,
    reference_couplings,
    site_basis_profile,
    truncation_threshold_map,
    xi_sweep,
)


def test_xi_sweep_columns():
    """Test the sweep lists exact and model decay lengths and the diffusion shape per kappa."""
    result = xi_sweep(XiSweepParameters(kappa=[0.3, 0.8], M=20), "natural")
    frame = result.tables["xi_sweep"]
    assert list(frame.columns) == [
        "kappa",
        "xi_exact",
        "xi_effective",
        "xi_direct",
        "diffusion_shape",
    ]
    assert frame["diffusion_shape"].iloc[0] > frame["diffusion_shape"].iloc[1] > 0.0
    assert frame["xi_direct"].iloc[0] == pytest.approx(frame["xi_direct"].iloc[1], abs=1e-12)


def test_lieb_couplings_resolve_identity():
    """Test B and C sums add up to delta_{j,0} for every row."""
    frame = lieb_couplings(LiebCouplingParameters(a=[1.0, 4.0], j_max=3), "natural").tables[
        "lieb_couplings"
    ]
    total = frame["f_j"] + frame["c_sum"]
    assert total.tolist() == pytest.approx([float(j == 0) for j in frame["j"]], abs=1e-8)


def test_single_state_window():
    """Test site-basis and coherence tables are clipped to the window."""
    params = SingleStateParameters(kappa=0.3, omega_W=1.0, M=10, window=3)
    cells = site_basis_profile(params, "natural").tables["site_basis_profile"]
    assert cells["cell"].tolist() == list(range(-3, 4))
    coherence = g1_map(params, "natural").tables["g1"]
    assert coherence[["j", "l"]].abs().to_numpy().max() <= 3


def test_threshold_map_rows():
    """Test dense and closed-form double occupancies side by side."""
    frame = truncation_threshold_map(
        ThresholdMapParameters(U0=[0.0, 2.0], omega=[1.0]), "natural"
    ).tables["truncation_threshold_map"]
    assert math.isnan(frame["double_occupancy_exact"].iloc[0])
    assert frame["double_occupancy"].iloc[1] == pytest.approx(
        frame["double_occupancy_exact"].iloc[1], rel=1e-2
    )


def test_reference_couplings_are_b_sublattice():
    """Test the interacting experiments use the B-sublattice couplings."""
    couplings = reference_couplings()
    assert couplings.sublattice == "B"
    assert couplings.U1 == pytest.approx(0.133, abs=2e-3)


def test_interacting_parameters_exclusive_strengths():
    """Test U1 and U_B cannot both be given."""
    with pytest.raises(ValueError, match="either U1 or U_B"):
        InteractingProfileParameters(kappa=0.3, U1=0.5, U_B=1.0)


def test_interacting_profile_outputs():
    """Test the dense profile experiment reports densities, coherence and f."""
    params = InteractingProfileParameters(n_sites=3, kappa=0.3, U1=0.5, omega_W=0.5)
    result = interacting_profile(params, "natural")
    assert set(result.tables) == {"density_profile", "g1"}
    summary = result.documents["summary"]
    assert 0.0 < summary["f"] < 1.0
    assert summary["parameters"]["U1"] == pytest.approx(0.5)


def test_fraction_map_grid():
    """Test one row per (kappa, U1) pair."""
    params = FractionMapParameters(n_sites=3, kappa=[0.3, 0.6], U1=[0.0, 1.0], omega_W=0.5)
    frame = f_vs_kappa_U1(params, "natural").tables["f_vs_kappa_U1"]
    assert len(frame) == 4
    assert frame["f"].between(0.0, 1.0).all()
