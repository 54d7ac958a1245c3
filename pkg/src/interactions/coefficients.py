"""Effective Wannier-basis interaction coefficients of the sawtooth flat band.

An onsite Hubbard term U_X x^dag x^dag x x becomes, in the Wannier basis,

    sum_i sum_{j,l,m} U^{eff,X}_{j,l,m} W^dag_i W^dag_{i+j} W_{i+l} W_{i+m}

with U^{eff,X} a three-dimensional Brillouin-zone integral restricted to
|k' + q + q'| <= pi. Writing s = k' + q splits the restricted domain into two
prisms on which the integrand is smooth and factorizes as F(s, q) G(s, q'),
so each prism is integrated with nested Gauss-Legendre rules.
"""

import itertools
from typing import Iterable, Literal, Optional, Sequence

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from src.errors import InvalidParameter, MissingEntry, QuadratureNotConverged
from src.utils.config import get_settings
from src.utils.logging import setup_logging
from src.utils.quadrature import gauss_legendre

logger = setup_logging(__name__)

InteractionSublattice = Literal["A", "B"]
Index = tuple[int, int, int]


class InteractionTable(BaseModel):
    """U^eff coefficients in units of the onsite interaction of their sublattice."""

    model_config = ConfigDict(frozen=True)

    entries: dict[tuple[str, int, int, int], float] = Field(
        ..., description="(sublattice, j', l', m') -> coefficient"
    )
    index_bound: int = Field(..., ge=0, description="Largest |index| retained")
    n_points: int = Field(..., description="Gauss-Legendre nodes per axis")

    def get(self, sublattice: str, j: int, l: int, m: int) -> float:
        """
        Look up one coefficient.

        Raises:
            MissingEntry: If the entry was not computed
        """
        try:
            return self.entries[(sublattice, j, l, m)]
        except KeyError:
            raise MissingEntry(
                f"No U^eff entry for sublattice {sublattice}, indices ({j}, {l}, {m}) "
                f"(table bound {self.index_bound})"
            ) from None

    @property
    def sublattices(self) -> tuple[str, ...]:
        return tuple(sorted({key[0] for key in self.entries}))

    def to_frame(self) -> pd.DataFrame:
        """Columns: sublattice, j, l, m, value; sorted by sublattice then indices."""
        rows = [
            {"sublattice": sub, "j": j, "l": l, "m": m, "value": value}
            for (sub, j, l, m), value in sorted(self.entries.items())
        ]
        return pd.DataFrame(rows, columns=["sublattice", "j", "l", "m", "value"])


class TruncatedCouplings(BaseModel):
    """Couplings of the single-excitation interaction Hamiltonian, in units of U_X."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    U0: float = Field(..., description="Onsite term W^dag W^dag W W")
    U1: float = Field(..., description="Nearest-neighbour cross-Kerr")
    U2: float = Field(..., description="Next-nearest-neighbour cross-Kerr")
    U3: float = Field(..., description="Density-assisted tunnelling")
    sublattice: InteractionSublattice = "B"

    def scaled(self, strength: float) -> "TruncatedCouplings":
        """Couplings multiplied by the onsite strength U_X."""
        return TruncatedCouplings(
            U0=self.U0 * strength,
            U1=self.U1 * strength,
            U2=self.U2 * strength,
            U3=self.U3 * strength,
            sublattice=self.sublattice,
        )


def _inverse_root(x: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.asarray(1.0 / np.sqrt(np.cos(x) + 2.0))


def _prism_rules(
    n_points: int,
) -> list[tuple[NDArray[np.float64], NDArray[np.float64], tuple[NDArray[np.float64], ...]]]:
    """Nodes of the two prisms s >= 0 and s < 0, with q and q' rules per s node."""
    rules = []
    for s_lower, s_upper in ((0.0, 2.0 * np.pi), (-2.0 * np.pi, 0.0)):
        s, ws = gauss_legendre(n_points, s_lower, s_upper)
        if s_lower >= 0.0:
            q, wq = gauss_legendre(n_points, s - np.pi, np.full_like(s, np.pi))
            qp, wqp = gauss_legendre(n_points, np.full_like(s, -np.pi), np.pi - s)
        else:
            q, wq = gauss_legendre(n_points, np.full_like(s, -np.pi), s + np.pi)
            qp, wqp = gauss_legendre(n_points, -np.pi - s, np.full_like(s, np.pi))
        rules.append((s, ws, (q, wq, qp, wqp)))
    return rules


def _factors(
    sublattice: str, s: NDArray[np.float64], q: NDArray[np.float64], qp: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    # Integrand = F(s, q) * G(s, q') with k' = s - q and k = -(s + q')
    s_col = s[:, None]
    k_prime = s_col - q
    k_total = s_col + qp
    left = _inverse_root(k_prime) * _inverse_root(q)
    right = _inverse_root(qp) * _inverse_root(k_total)
    if sublattice == "A":
        left = 2.0 * left * np.cos(k_prime / 2.0) * np.cos(q / 2.0)
        right = 2.0 * right * np.cos(qp / 2.0) * np.cos(k_total / 2.0)
    return left, right


def _integrate(
    sublattice: str, indices: Sequence[Index], n_points: int
) -> NDArray[np.float64]:
    """U^eff for each (j', l', m') at one quadrature order."""
    index_array = np.asarray(indices, dtype=np.int64).reshape(-1, 3)
    j, l, m = index_array.T
    shifts = np.unique(l - j)
    targets = np.unique(m)
    shift_pos = np.searchsorted(shifts, l - j)
    target_pos = np.searchsorted(targets, m)

    total = np.zeros(len(index_array), dtype=np.complex128)
    for s, ws, (q, wq, qp, wqp) in _prism_rules(n_points):
        left, right = _factors(sublattice, s, q, qp)
        # k' j' + q l' + q' m' = s j' + q (l' - j') + q' m'
        left_sums = np.einsum("sq,sqd->sd", wq * left, np.exp(1j * q[..., None] * shifts))
        right_sums = np.einsum("sq,sqd->sd", wqp * right, np.exp(1j * qp[..., None] * targets))
        outer = ws[:, None] * np.exp(1j * s[:, None] * j[None, :])
        total += np.sum(outer * left_sums[:, shift_pos] * right_sums[:, target_pos], axis=0)

    values = total / (2.0 * np.pi) ** 3
    imaginary = float(np.max(np.abs(values.imag))) if len(values) else 0.0
    if imaginary > 1e-10:
        logger.warning(f"U^eff integrals carry an imaginary part up to {imaginary:.3e}")
    return np.asarray(values.real, dtype=np.float64)


def _converged(
    sublattice: str, indices: Sequence[Index], n_points: int, tol: float
) -> NDArray[np.float64]:
    coarse = _integrate(sublattice, indices, n_points)
    fine = _integrate(sublattice, indices, 2 * n_points)
    change = float(np.max(np.abs(fine - coarse))) if len(fine) else 0.0
    logger.debug(
        f"U^eff {sublattice}: {len(fine)} entries, {n_points} -> {2 * n_points} nodes "
        f"changed values by {change:.3e}"
    )
    if change > tol:
        raise QuadratureNotConverged(
            f"Refining {n_points} -> {2 * n_points} nodes changed U^eff,{sublattice} "
            f"by {change:.3e} > {tol:.1e}",
            change=change,
        )
    return fine


def u_eff(
    sublattice: InteractionSublattice,
    j: int,
    l: int,
    m: int,
    n_points: Optional[int] = None,
    tol: Optional[float] = None,
) -> float:
    """
    Effective interaction coefficient U^{eff,X}_{j,l,m} in units of U_X.

    Args:
        sublattice: "A" or "B"
        j, l, m: Relative Wannier indices of W^dag_{i+j} W_{i+l} W_{i+m}
        n_points: Gauss-Legendre nodes per axis (defaults to settings.interaction_points)
        tol: Refinement tolerance (defaults to settings.interaction_tol)

    Returns:
        Coefficient value

    Raises:
        QuadratureNotConverged: If doubling the nodes changes the value by more than tol
    """
    if sublattice not in ("A", "B"):
        raise InvalidParameter(f"sublattice must be 'A' or 'B', got {sublattice!r}")
    settings = get_settings()
    n_points = n_points or settings.interaction_points
    tol = settings.interaction_tol if tol is None else tol
    return float(_converged(sublattice, [(j, l, m)], n_points, tol)[0])


def build_interaction_table(
    index_bound: int = 2,
    sublattices: Iterable[InteractionSublattice] = ("A", "B"),
    n_points: Optional[int] = None,
    tol: Optional[float] = None,
) -> InteractionTable:
    """
    Every coefficient with all indices in [-index_bound, index_bound].

    Args:
        index_bound: Largest |index| computed
        sublattices: Sublattices to tabulate
        n_points: Gauss-Legendre nodes per axis (defaults to settings.interaction_points)
        tol: Refinement tolerance (defaults to settings.interaction_tol)

    Returns:
        InteractionTable
    """
    if index_bound < 0:
        raise InvalidParameter(f"index_bound must be non-negative, got {index_bound}")
    settings = get_settings()
    n_points = n_points or settings.interaction_points
    tol = settings.interaction_tol if tol is None else tol

    span = range(-index_bound, index_bound + 1)
    indices = list(itertools.product(span, span, span))
    entries: dict[tuple[str, int, int, int], float] = {}
    for sublattice in sublattices:
        values = _converged(sublattice, indices, n_points, tol)
        entries.update(
            {(sublattice, *index): float(value) for index, value in zip(indices, values)}
        )
        logger.info(
            f"Tabulated {len(indices)} U^eff,{sublattice} entries up to |index| {index_bound}"
        )
    return InteractionTable(entries=entries, index_bound=index_bound, n_points=n_points)


def truncated_couplings(
    table: InteractionTable, sublattice: InteractionSublattice = "B"
) -> TruncatedCouplings:
    """
    Couplings of the single-excitation Hamiltonian with their multiplicities.

    U0 = u(0,0,0), U1 = 4 u(1,1,0), U2 = 4 u(2,2,0), U3 = 2 u(-1,0,1).

    Raises:
        MissingEntry: If the table lacks one of the four entries
    """
    return TruncatedCouplings(
        U0=table.get(sublattice, 0, 0, 0),
        U1=4.0 * table.get(sublattice, 1, 1, 0),
        U2=4.0 * table.get(sublattice, 2, 2, 0),
        U3=2.0 * table.get(sublattice, -1, 0, 1),
        sublattice=sublattice,
    )


def contributing_tuples(
    creation: Sequence[int], annihilation: Sequence[int], span: int = 3
) -> list[tuple[int, int, int, int]]:
    """
    All (i, j', l', m') whose term W^dag_i W^dag_{i+j'} W_{i+l'} W_{i+m'} equals
    the normal-ordered product of the given creation and annihilation sites.

    Args:
        creation: The two sites carrying W^dag
        annihilation: The two sites carrying W
        span: Largest |index| searched

    Returns:
        Sorted list of contributing tuples
    """
    if len(creation) != 2 or len(annihilation) != 2:
        raise InvalidParameter("quartic terms need exactly two creation and two annihilation sites")
    wanted_creation = sorted(creation)
    wanted_annihilation = sorted(annihilation)
    offsets = range(-span, span + 1)
    found = []
    for i in sorted(set(creation)):
        for j, l, m in itertools.product(offsets, offsets, offsets):
            if sorted((i, i + j)) == wanted_creation and sorted(
                (i + l, i + m)
            ) == wanted_annihilation:
                found.append((i, j, l, m))
    return sorted(found)
