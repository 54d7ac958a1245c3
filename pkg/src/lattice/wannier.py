"""Flat-band Wannier coefficients for the sawtooth and Lieb chains.

The coefficients are zone averages of smooth periodic integrands, evaluated as
real cosine integrals. Sawtooth A-site coefficients carry a half-cell shift:
w_A(r) = w_A(1 - r), i.e. the A sites sit half a cell away from the B sites.
"""

from functools import lru_cache
from typing import Literal, Mapping, Optional

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from src.errors import FlatBandViolation, InvalidParameter
from src.lattice.models import LiebSpec
from src.utils.config import get_settings
from src.utils.logging import setup_logging
from src.utils.quadrature import zone_average

logger = setup_logging(__name__)

Sublattice = Literal["A", "B", "C"]
LatticeKind = Literal["sawtooth", "lieb"]

SAWTOOTH_SUBLATTICES: tuple[Sublattice, ...] = ("A", "B")
LIEB_SUBLATTICES: tuple[Sublattice, ...] = ("B", "C")


class WannierTable(BaseModel):
    """Immutable table of Wannier coefficients for separations -r_max..r_max."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    lattice_kind: LatticeKind
    r_max: int = Field(..., ge=0)
    values: dict[str, tuple[float, ...]] = Field(
        ..., description="Per sublattice, coefficients ordered from r = -r_max to r_max"
    )
    half_cell_offset: dict[str, float] = Field(
        default_factory=dict, description="Sublattice position relative to the cell origin"
    )
    lieb_a: Optional[float] = None

    @property
    def sublattices(self) -> tuple[str, ...]:
        return tuple(self.values)

    def coefficient(self, sublattice: str, r: int) -> float:
        """w_X(r); separations beyond r_max are truncated to zero."""
        if abs(r) > self.r_max:
            return 0.0
        return self.values[sublattice][r + self.r_max]

    def array(self, sublattice: str) -> NDArray[np.float64]:
        """Coefficients for r = -r_max..r_max as an array."""
        return np.asarray(self.values[sublattice], dtype=np.float64)

    def matrix(
        self, sublattice: str, rows: NDArray[np.int64], cols: NDArray[np.int64]
    ) -> NDArray[np.float64]:
        """Matrix M[i, j] = w_X(rows[i] - cols[j])."""
        sep = np.subtract.outer(np.asarray(rows), np.asarray(cols))
        padded = np.concatenate([self.array(sublattice), [0.0]])
        index = np.where(np.abs(sep) <= self.r_max, sep + self.r_max, -1)
        return padded[index]

    def to_frame(self) -> pd.DataFrame:
        """Long-format view with columns (sublattice, r, value)."""
        r = np.arange(-self.r_max, self.r_max + 1)
        frames = [
            pd.DataFrame({"sublattice": name, "r": r, "value": self.array(name)})
            for name in self.values
        ]
        return pd.concat(frames, ignore_index=True)


def _sawtooth_profiles(
    r: NDArray[np.int64], n_points: Optional[int]
) -> dict[str, NDArray[np.float64]]:
    def cosine_moments(shift: int) -> NDArray[np.float64]:
        return zone_average(
            lambda k: np.cos(np.outer(r - shift, k)) / np.sqrt(np.cos(k) + 2.0),
            n_points=n_points,
        )

    base = cosine_moments(0)
    return {
        "A": (np.sqrt(2.0) / 2.0) * (base + cosine_moments(1)),
        "B": -base,
    }


def _lieb_profiles(
    r: NDArray[np.int64], a: float, n_points: Optional[int]
) -> dict[str, NDArray[np.float64]]:
    def cosine_moments(shift: int) -> NDArray[np.float64]:
        return zone_average(
            lambda k: np.cos(np.outer(r + shift, k)) / np.sqrt(1.0 + a * np.cos(k / 2.0) ** 2),
            n_points=n_points,
        )

    base = cosine_moments(0)
    return {
        "B": base,
        "C": (np.sqrt(a) / 2.0) * (base + cosine_moments(1)),
    }


def sawtooth_wannier(sublattice: Sublattice, r: int, n_points: Optional[int] = None) -> float:
    """
    Sawtooth flat-band Wannier coefficient w_A(r) or w_B(r).

    Args:
        sublattice: "A" or "B"
        r: Integer separation
        n_points: Quadrature grid size (defaults to settings.quadrature_points)

    Returns:
        Real coefficient

    Raises:
        QuadratureNotConverged: If grid doubling changes the value by more than the tolerance
        InvalidParameter: If the sublattice is not part of the sawtooth chain
    """
    if sublattice not in SAWTOOTH_SUBLATTICES:
        raise InvalidParameter(f"sawtooth sublattice must be A or B, got {sublattice!r}")
    profiles = _sawtooth_profiles(np.array([r]), n_points)
    return float(profiles[sublattice][0])


def lieb_wannier(
    sublattice: Sublattice, r: int, spec: LiebSpec, n_points: Optional[int] = None
) -> float:
    """
    Lieb flat-band Wannier coefficient w_B(r) or w_C(r) for a = (2J/g)^2.

    Raises:
        FlatBandViolation: If omega_B != omega_C
        QuadratureNotConverged: If grid doubling changes the value by more than the tolerance
    """
    if sublattice not in LIEB_SUBLATTICES:
        raise InvalidParameter(f"Lieb sublattice must be B or C, got {sublattice!r}")
    if not spec.flat_band:
        raise FlatBandViolation("Lieb Wannier functions need omega_B = omega_C")
    profiles = _lieb_profiles(np.array([r]), spec.a, n_points)
    return float(profiles[sublattice][0])


def build_sawtooth_table(
    r_max: Optional[int] = None, n_points: Optional[int] = None
) -> WannierTable:
    """Build the sawtooth table for separations |r| <= r_max."""
    r_max = get_settings().wannier_r_max if r_max is None else r_max
    r = np.arange(-r_max, r_max + 1)
    profiles = _sawtooth_profiles(r, n_points)
    # Enforce exact parity of the B coefficients
    profiles["B"] = 0.5 * (profiles["B"] + profiles["B"][::-1])
    logger.info(f"Built sawtooth Wannier table with r_max={r_max}")
    return WannierTable(
        lattice_kind="sawtooth",
        r_max=r_max,
        values={name: tuple(float(v) for v in vals) for name, vals in profiles.items()},
        half_cell_offset={"A": -0.5, "B": 0.0},
    )


@lru_cache(maxsize=8)
def get_sawtooth_table(
    r_max: Optional[int] = None, n_points: Optional[int] = None
) -> WannierTable:
    """Get cached sawtooth table."""
    return build_sawtooth_table(r_max=r_max, n_points=n_points)


def build_lieb_table(
    spec: LiebSpec, r_max: Optional[int] = None, n_points: Optional[int] = None
) -> WannierTable:
    """Build the Lieb table (B and C sublattices) for separations |r| <= r_max."""
    if not spec.flat_band:
        raise FlatBandViolation("Lieb Wannier functions need omega_B = omega_C")
    r_max = get_settings().wannier_r_max if r_max is None else r_max
    r = np.arange(-r_max, r_max + 1)
    profiles = _lieb_profiles(r, spec.a, n_points)
    profiles["B"] = 0.5 * (profiles["B"] + profiles["B"][::-1])
    logger.info(f"Built Lieb Wannier table with a={spec.a:.6g}, r_max={r_max}")
    return WannierTable(
        lattice_kind="lieb",
        r_max=r_max,
        values={name: tuple(float(v) for v in vals) for name, vals in profiles.items()},
        half_cell_offset={"B": 0.0, "C": 0.5},
        lieb_a=spec.a,
    )


def autocorrelation(table: WannierTable, sublattice: str, lag: int) -> float:
    """Truncated sum over i of w_X(r_i) w_X(r_i - lag)."""
    w = table.array(sublattice)
    full = np.correlate(w, w, mode="full")
    centre = len(w) - 1
    if abs(lag) > centre:
        return 0.0
    return float(full[centre + lag])


def orthogonality_defect(table: WannierTable) -> NDArray[np.float64]:
    """
    Residuals of the Wannier orthogonality relation.

    Returns:
        Matrix D[j, k] = sum_i sum_X w_X(r_j - r_i) w_X(r_k - r_i) - delta_jk for
        sites j, k = 0..r_max // 2, so every |j - k| <= r_max / 2 is covered
    """
    span = table.r_max // 2
    overlap = {
        lag: sum(autocorrelation(table, name, lag) for name in table.sublattices)
        for lag in range(-span, span + 1)
    }
    sites = np.arange(span + 1)
    lags = np.subtract.outer(sites, sites)
    defect = np.vectorize(lambda d: overlap[int(d)])(lags).astype(np.float64)
    return defect - np.eye(span + 1)


def site_drive_for_wannier(
    site: int, omega: complex, table: WannierTable
) -> dict[tuple[str, int], complex]:
    """Site-basis amplitudes Omega_{X,j} = omega * w_X(r_j - r_site) that drive one Wannier mode."""
    amplitudes: dict[tuple[str, int], complex] = {}
    for name in table.sublattices:
        for offset in range(-table.r_max, table.r_max + 1):
            value = table.coefficient(name, offset)
            if value != 0.0:
                amplitudes[(name, site + offset)] = omega * value
    return amplitudes


def project_site_drive(
    amplitudes: Mapping[tuple[str, int], complex], table: WannierTable, sites: range
) -> dict[int, complex]:
    """Wannier-mode drives sum_{X,j} Omega_{X,j} w_X(r_j - r_m) for each m in sites."""
    projected: dict[int, complex] = {}
    for m in sites:
        total = sum(
            (amp * table.coefficient(name, j - m) for (name, j), amp in amplitudes.items()),
            start=0j,
        )
        projected[m] = complex(total)
    return projected
