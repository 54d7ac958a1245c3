"""Pytest configuration and shared fixtures."""

from pathlib import Path

import pytest

from src.dissipation.kernel import DissipationKernel, sawtooth_kernel
from src.gaussian.moments import DriveSpec
from src.lattice.wannier import WannierTable, get_sawtooth_table


@pytest.fixture
def sawtooth_table() -> WannierTable:
    """Cached sawtooth Wannier table at the default r_max."""
    return get_sawtooth_table()


@pytest.fixture
def kernel_kappa_01() -> DissipationKernel:
    """Sawtooth kernel at kappa = 0.1 with the default cutoff."""
    return sawtooth_kernel(gamma_A=1.0, kappa=0.1)


@pytest.fixture
def coherent_drive() -> DriveSpec:
    """Unit coherent drive on the Wannier mode at site 0."""
    return DriveSpec.single_site(1.0)


@pytest.fixture
def weak_pump() -> DriveSpec:
    """Incoherent pump P = gamma_A / 100 on the B site of cell 0."""
    return DriveSpec.site_pump(0.01, "B", 0)


@pytest.fixture
def config_file(tmp_path: Path):
    """Write a key-value config file and return its path."""

    def write(text: str, name: str = "experiment.cfg") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
