"""Lattice models, Bloch bands and flat-band Wannier coefficients."""

from src.lattice.models import (
    LiebSpec,
    SawtoothSpec,
    band_gap,
    flat_band_energy,
    lieb_bands,
    lieb_bloch_matrix,
    sawtooth_bands,
    sawtooth_bloch_matrix,
)
from src.lattice.wannier import (
    WannierTable,
    build_lieb_table,
    build_sawtooth_table,
    get_sawtooth_table,
    lieb_wannier,
    orthogonality_defect,
    sawtooth_wannier,
)

__all__ = [
    "LiebSpec",
    "SawtoothSpec",
    "WannierTable",
    "band_gap",
    "build_lieb_table",
    "build_sawtooth_table",
    "flat_band_energy",
    "get_sawtooth_table",
    "lieb_bands",
    "lieb_bloch_matrix",
    "lieb_wannier",
    "orthogonality_defect",
    "sawtooth_bands",
    "sawtooth_bloch_matrix",
    "sawtooth_wannier",
]
