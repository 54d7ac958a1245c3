"""Sawtooth and Lieb lattice models and their Bloch bands.

Positions are integer unit-cell indices with unit lattice spacing.
"""

from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import FlatBandViolation
from src.utils.config import get_settings

FloatArray = NDArray[np.float64]


def _default_rel_tol() -> float:
    return get_settings().flat_band_rel_tol


class SawtoothSpec(BaseModel):
    """Sawtooth chain: B sites coupled by t, apex A sites coupled to both neighbours by t'."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega0: float = Field(..., description="On-site energy")
    t: float = Field(..., description="B-B hopping")
    t_prime: float = Field(..., description="A-B hopping")
    n_cells: int = Field(default=61, ge=3, description="Number of unit cells")
    rel_tol: float = Field(default_factory=_default_rel_tol, gt=0)

    @property
    def flat_band(self) -> bool:
        """True when t' = sqrt(2) t within rel_tol."""
        return abs(self.t_prime - np.sqrt(2.0) * self.t) <= self.rel_tol * abs(self.t)


class LiebSpec(BaseModel):
    """Quasi-1D Lieb chain: A chain with hopping J, B and C decorations coupled by g."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega_A: float
    omega_B: float
    omega_C: float
    J: float
    g: float
    n_cells: int = Field(default=61, ge=1)
    rel_tol: float = Field(default_factory=_default_rel_tol, gt=0)

    @model_validator(mode="after")
    def _check_decoration(self) -> "LiebSpec":
        if self.g == 0.0:
            raise ValueError("g must be non-zero so that a = (2J/g)^2 is finite")
        return self

    @property
    def a(self) -> float:
        """Shape parameter (2J/g)^2 of the flat-band Wannier functions."""
        return (2.0 * self.J / self.g) ** 2

    @property
    def flat_band(self) -> bool:
        scale = max(1.0, abs(self.omega_B), abs(self.omega_C))
        return abs(self.omega_B - self.omega_C) <= self.rel_tol * scale


LatticeSpec = Union[SawtoothSpec, LiebSpec]


def sawtooth_bloch_matrix(spec: SawtoothSpec, k: float) -> NDArray[np.complex128]:
    """2x2 Bloch Hamiltonian in the (A, B) basis."""
    off = spec.t_prime * (1.0 + np.exp(1j * k))
    return np.array(
        [
            [spec.omega0, off],
            [np.conj(off), spec.omega0 + 2.0 * spec.t * np.cos(k)],
        ],
        dtype=np.complex128,
    )


def sawtooth_bands(spec: SawtoothSpec, k: ArrayLike) -> tuple[FloatArray, FloatArray]:
    """
    Sawtooth Bloch bands E_-(k), E_+(k).

    Args:
        spec: Lattice parameters
        k: Wavenumber(s) in [-pi, pi]

    Returns:
        (lower, upper) band energies, broadcast over k
    """
    k = np.asarray(k, dtype=np.float64)
    cos_k = np.cos(k)
    centre = spec.omega0 + spec.t * cos_k
    root = np.sqrt(spec.t**2 * cos_k**2 + 2.0 * spec.t_prime**2 * (1.0 + cos_k))
    return centre - root, centre + root


def band_gap(spec: SawtoothSpec, n_k: int = 1001) -> float:
    """Gap min E_+ - max E_- over a uniform grid including both zone edges."""
    lower, upper = sawtooth_bands(spec, np.linspace(-np.pi, np.pi, n_k))
    return float(np.min(upper) - np.max(lower))


def lieb_bloch_matrix(spec: LiebSpec, k: float) -> NDArray[np.complex128]:
    """3x3 Bloch Hamiltonian in the (A, B, C) basis."""
    chain = spec.J * (1.0 + np.exp(-1j * k))
    return np.array(
        [
            [spec.omega_A, chain, spec.g],
            [np.conj(chain), spec.omega_B, 0.0],
            [spec.g, 0.0, spec.omega_C],
        ],
        dtype=np.complex128,
    )


def _hermitian_cubic_roots(a2: FloatArray, a1: FloatArray, a0: FloatArray) -> FloatArray:
    # Roots of x^3 - a2 x^2 + a1 x - a0 with three real roots, trigonometric form
    shift = a2 / 3.0
    p = a1 - a2**2 / 3.0
    q = -2.0 * a2**3 / 27.0 + a1 * a2 / 3.0 - a0
    p = np.minimum(p, 0.0)
    amplitude = 2.0 * np.sqrt(-p / 3.0)
    safe_p = np.where(p < 0.0, p, -1.0)
    arg = np.where(p < 0.0, (3.0 * q / (2.0 * safe_p)) * np.sqrt(-3.0 / safe_p), 0.0)
    theta = np.arccos(np.clip(arg, -1.0, 1.0)) / 3.0
    roots = np.stack(
        [amplitude * np.cos(theta - 2.0 * np.pi * m / 3.0) for m in range(3)], axis=-1
    )
    return np.sort(roots + shift[..., None], axis=-1)


def lieb_bands(spec: LiebSpec, k: ArrayLike) -> FloatArray:
    """
    Lieb Bloch bands, sorted ascending along the last axis.

    For a flat-band spec the bands are omega_B and
    (omega_A + omega_B)/2 +- sqrt((omega_A - omega_B)^2/4 + 2J^2(1 + cos k) + g^2);
    otherwise the three closed-form roots of the characteristic cubic.
    """
    k = np.asarray(k, dtype=np.float64)
    chain_sq = 2.0 * spec.J**2 * (1.0 + np.cos(k))

    if spec.flat_band:
        centre = 0.5 * (spec.omega_A + spec.omega_B)
        root = np.sqrt(0.25 * (spec.omega_A - spec.omega_B) ** 2 + chain_sq + spec.g**2)
        flat = np.full_like(k, spec.omega_B)
        return np.sort(np.stack([centre - root, flat, centre + root], axis=-1), axis=-1)

    wa, wb, wc, g2 = spec.omega_A, spec.omega_B, spec.omega_C, spec.g**2
    a2 = np.full_like(k, wa + wb + wc)
    a1 = wa * wb + wa * wc + wb * wc - chain_sq - g2
    a0 = wa * wb * wc - chain_sq * wc - g2 * wb
    return _hermitian_cubic_roots(a2, a1, np.asarray(a0, dtype=np.float64))


def flat_band_energy(spec: LatticeSpec) -> float:
    """
    Energy of the flat band.

    Raises:
        FlatBandViolation: If the spec does not satisfy its flat-band condition
    """
    if not spec.flat_band:
        raise FlatBandViolation(f"{type(spec).__name__} parameters do not produce a flat band")
    if isinstance(spec, SawtoothSpec):
        return spec.omega0 - 2.0 * spec.t
    return spec.omega_B
