"""Observables derived from steady-state correlations."""

import math
from dataclasses import dataclass
from typing import Literal, Mapping, Optional

import numpy as np
from numpy.typing import NDArray

from src.errors import InvalidParameter, NonPositiveDensity, ZeroDensitySite
from src.lattice.wannier import WannierTable

DecayConvention = Literal["natural", "log10"]

ZERO_DENSITY = 1e-30


@dataclass(frozen=True)
class CoherenceMap:
    """First-order coherence g1(j, l) over the sites with non-zero density."""

    sites: NDArray[np.int64]
    values: NDArray[np.complex128]
    excluded: tuple[int, ...] = ()

    def at(self, j: int, l: int) -> complex:
        index = {int(s): n for n, s in enumerate(self.sites)}
        return complex(self.values[index[j], index[l]])


def site_basis_densities(
    second: NDArray[np.complex128],
    sites: NDArray[np.int64],
    table: WannierTable,
    pad: int = 0,
) -> tuple[NDArray[np.int64], dict[str, NDArray[np.float64]]]:
    """
    Per-cell sublattice densities <x_i^dag x_i> from Wannier correlations.

    <x_i^dag x_i> = sum_{j,k} w_X(r_i - r_j) w_X(r_i - r_k) C_jk.

    Args:
        second: Correlation matrix C on the given Wannier sites
        sites: Wannier site indices of C
        table: Wannier coefficients
        pad: Extra cells reported on each side of the Wannier window

    Returns:
        (cells, {sublattice: densities})
    """
    cells = np.arange(int(sites[0]) - pad, int(sites[-1]) + pad + 1)
    densities: dict[str, NDArray[np.float64]] = {}
    for name in table.sublattices:
        projector = table.matrix(name, cells, sites)
        densities[name] = np.real(np.einsum("ij,jk,ik->i", projector, second, projector))
    return cells, densities


def g1(
    second: NDArray[np.complex128],
    sites: Optional[NDArray[np.int64]] = None,
    strict: bool = False,
) -> CoherenceMap:
    """
    First-order coherence g1(j, l) = C_jl / sqrt(C_jj C_ll).

    Sites with C_jj <= 1e-30 are excluded from the map.

    Raises:
        ZeroDensitySite: If strict and any site has vanishing density
    """
    if sites is None:
        sites = np.arange(second.shape[0])
    density = np.real(np.diag(second))
    keep = density > ZERO_DENSITY
    excluded = tuple(int(s) for s in np.asarray(sites)[~keep])
    if strict and excluded:
        raise ZeroDensitySite(f"Sites {list(excluded)} have zero density")

    sub = second[np.ix_(keep, keep)]
    norm = np.sqrt(np.outer(density[keep], density[keep]))
    return CoherenceMap(sites=np.asarray(sites)[keep], values=sub / norm, excluded=excluded)


def decay_length(
    densities: Mapping[int, float], site: int, convention: DecayConvention = "natural"
) -> float:
    """
    Decay length from adjacent densities, xi_i = 1 / |log N_i - log N_{i+1}|.

    Returns math.inf for a flat profile.

    Raises:
        InvalidParameter: If site < 1
        NonPositiveDensity: If N_i or N_{i+1} is not positive
    """
    if site < 1:
        raise InvalidParameter(f"Decay length needs site >= 1, got {site}")
    n_here, n_next = densities[site], densities[site + 1]
    if n_here <= 0 or n_next <= 0:
        raise NonPositiveDensity(
            f"Decay length at site {site} needs positive densities, got {n_here}, {n_next}"
        )
    log = math.log if convention == "natural" else math.log10
    step = abs(log(n_here) - log(n_next))
    return math.inf if step == 0.0 else 1.0 / step


def decay_lengths(
    densities: Mapping[int, float], convention: DecayConvention = "natural"
) -> dict[int, float]:
    """Decay lengths for every site i >= 1 whose pair (i, i + 1) has positive densities."""
    lengths: dict[int, float] = {}
    for site in sorted(densities):
        if site < 1 or site + 1 not in densities:
            continue
        if densities[site] > 0 and densities[site + 1] > 0:
            lengths[site] = decay_length(densities, site, convention)
    return lengths
