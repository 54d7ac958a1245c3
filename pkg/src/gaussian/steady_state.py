"""End-to-end Gaussian steady-state solve and its report."""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from src.dissipation.kernel import DissipationKernel
from src.errors import UnstablePump
from src.gaussian.moments import (
    DriveSpec,
    MomentState,
    build_drift,
    solve_first_moments,
    solve_second_moments,
    stability_check,
)
from src.gaussian.observables import (
    CoherenceMap,
    DecayConvention,
    decay_lengths,
    g1,
    site_basis_densities,
)
from src.lattice.wannier import WannierTable, get_sawtooth_table
from src.utils.config import get_settings
from src.utils.logging import setup_logging

logger = setup_logging(__name__)


@dataclass
class SteadyStateReport:
    """Densities, coherence and decay lengths of one steady state."""

    state: MomentState
    densities: NDArray[np.float64]
    normalized: NDArray[np.float64]
    cells: NDArray[np.int64]
    site_densities: dict[str, NDArray[np.float64]]
    coherence: CoherenceMap
    xi: dict[int, float]
    convention: DecayConvention
    diagnostics: dict[str, float] = field(default_factory=dict)
    parameters: dict[str, Any] = field(default_factory=dict)

    @property
    def sites(self) -> NDArray[np.int64]:
        return self.state.sites

    def density(self, site: int) -> float:
        return float(self.densities[site - int(self.sites[0])])

    def density_map(self) -> dict[int, float]:
        return {int(s): float(n) for s, n in zip(self.sites, self.densities)}

    def density_frame(self) -> pd.DataFrame:
        """Columns: site, N, N_over_N0 and one density column per sublattice."""
        frame = pd.DataFrame(
            {"site": self.sites, "N": self.densities, "N_over_N0": self.normalized}
        )
        for name, values in self.site_densities.items():
            frame[f"n_{name}"] = values
        return frame

    def g1_frame(self) -> pd.DataFrame:
        """Long-format coherence map with columns j, l, re_g1, im_g1."""
        sites = self.coherence.sites
        j, l = np.meshgrid(sites, sites, indexing="ij")
        return pd.DataFrame(
            {
                "j": j.ravel(),
                "l": l.ravel(),
                "re_g1": np.real(self.coherence.values).ravel(),
                "im_g1": np.imag(self.coherence.values).ravel(),
            }
        )

    def summary(self) -> dict[str, Any]:
        """JSON-serializable parameters, diagnostics and decay lengths."""
        return {
            "parameters": self.parameters,
            "diagnostics": self.diagnostics,
            "decay_convention": self.convention,
            "xi": {str(site): value for site, value in self.xi.items()},
            "excluded_sites": list(self.coherence.excluded),
        }


def solve_steady_state(
    kernel: DissipationKernel,
    drive: DriveSpec,
    half_width: Optional[int] = None,
    corr_range: Optional[int] = None,
    full_correlations: bool = False,
    table: Optional[WannierTable] = None,
    convention: Optional[DecayConvention] = None,
) -> SteadyStateReport:
    """
    Solve the quadratic model and derive every reported observable.

    Args:
        kernel: Loss kernel
        drive: Drives, pumps and detuning
        half_width: M (defaults to settings.half_width)
        corr_range: Correlation truncation (defaults to settings.corr_range)
        full_correlations: Keep every correlation instead of truncating
        table: Wannier table (sawtooth table by default)
        convention: Decay-length logarithm (defaults to settings.decay_convention)

    Returns:
        SteadyStateReport

    Raises:
        UnstablePump: If gain outweighs loss
        SingularDrift: If the drift cannot be inverted
    """
    settings = get_settings()
    half_width = settings.half_width if half_width is None else half_width
    corr_range = None if full_correlations else (
        settings.corr_range if corr_range is None else corr_range
    )
    convention = convention or settings.decay_convention
    if table is None:
        table = get_sawtooth_table()

    problem = build_drift(kernel, drive, half_width, table=table)
    abscissa = stability_check(problem.loss, problem.gain)
    if abscissa >= 0.0:
        raise UnstablePump(f"Spectral abscissa {abscissa:.3e} >= 0; no steady state", abscissa)

    first = solve_first_moments(problem.drift, problem.source)
    second = solve_second_moments(problem, first.values, corr_range=corr_range)
    state = MomentState(
        sites=problem.sites, first=first.values, second=second, corr_range=corr_range
    )

    densities = state.densities
    centre = densities[half_width]
    reference = centre if centre > 0 else float(np.max(densities))
    normalized = densities / reference if reference > 0 else np.zeros_like(densities)

    cells, site_densities = site_basis_densities(second, problem.sites, table)
    coherence = g1(second, problem.sites)
    density_map = {int(s): float(n) for s, n in zip(problem.sites, densities)}
    xi = decay_lengths(density_map, convention)

    logger.info(
        f"Steady state on {problem.size} sites: N0={centre:.6e}, "
        f"condition number {first.condition_number:.3e}"
    )
    return SteadyStateReport(
        state=state,
        densities=densities,
        normalized=normalized,
        cells=cells,
        site_densities=site_densities,
        coherence=coherence,
        xi=xi,
        convention=convention,
        diagnostics={
            "condition_number": first.condition_number,
            "first_moment_residual": first.residual,
            "spectral_abscissa": abscissa,
        },
        parameters={
            "kappa": kernel.kappa,
            "gamma_ref": kernel.gamma_ref,
            "kernel_cutoff": kernel.cutoff,
            "half_width": half_width,
            "corr_range": corr_range,
            "detuning": drive.detuning,
            "coherent": {str(k): [v.real, v.imag] for k, v in drive.coherent.items()},
            "incoherent": {f"{x}{i}": p for (x, i), p in drive.incoherent.items()},
        },
    )
