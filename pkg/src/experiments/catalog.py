"""The named experiments: each maps a parameter model to tables and documents."""

from functools import lru_cache
from typing import Literal, Optional

import numpy as np
import pandas as pd
from pydantic import Field, model_validator

from src.approx.models import xi_comparison
from src.dissipation.kernel import (
    f_sawtooth,
    lieb_c_sum,
    lieb_f,
    lieb_kernel,
    sawtooth_kernel,
)
from src.experiments.config import ExperimentParameters
from src.experiments.registry import ExperimentResult, experiment
from src.gaussian.moments import DriveSpec
from src.gaussian.observables import DecayConvention
from src.gaussian.steady_state import SteadyStateReport, solve_steady_state
from src.interactions.coefficients import (
    TruncatedCouplings,
    build_interaction_table,
    truncated_couplings,
)
from src.interactions.kerr import kerr_correlation_exact, truncation_threshold
from src.lattice.models import LiebSpec
from src.lattice.wannier import (
    build_lieb_table,
    build_sawtooth_table,
    orthogonality_defect,
)
from src.lindblad.problem import TruncatedLindbladProblem
from src.lindblad.solver import DenseSteadyState, nonlocal_fraction, steady_state
from src.utils.config import get_settings
from src.utils.logging import setup_logging

logger = setup_logging(__name__)


# Parameter models


class KernelTableParameters(ExperimentParameters):
    kappa: list[float] = Field(..., min_length=1)
    gamma_A: float = Field(default=1.0, gt=0)
    l_max: int = Field(default=5, ge=0)


class WannierTableParameters(ExperimentParameters):
    lattice: Literal["sawtooth", "lieb"] = "sawtooth"
    r_max: Optional[int] = Field(default=None, ge=1)
    a: float = Field(default=2.0, gt=0, description="Lieb shape parameter (2J/g)^2")


class GaussianParameters(ExperimentParameters):
    gamma_A: float = Field(default=1.0, gt=0)
    M: Optional[int] = Field(default=None, ge=1, description="Window half-width")
    cutoff: Optional[int] = Field(default=None, ge=1, description="Kernel cutoff")
    corr_range: Optional[int] = Field(default=None, ge=0)
    full_correlations: bool = False


class CoherentProfileParameters(GaussianParameters):
    kappa: list[float] = Field(..., min_length=1)
    omega_W: float = Field(default=1.0, gt=0)
    detuning: float = 0.0


class IncoherentProfileParameters(GaussianParameters):
    kappa: list[float] = Field(..., min_length=1)
    P: float = Field(..., gt=0, description="Site-basis pump rate")
    pump_sublattice: Literal["A", "B"] = "B"
    pump_cell: int = 0


class SingleStateParameters(GaussianParameters):
    kappa: float = Field(..., ge=0)
    omega_W: Optional[float] = Field(default=None, gt=0)
    P: Optional[float] = Field(default=None, gt=0)
    pump_sublattice: Literal["A", "B"] = "B"
    pump_cell: int = 0
    window: int = Field(default=8, ge=0, description="Largest |site| reported")

    @model_validator(mode="after")
    def _needs_a_drive(self) -> "SingleStateParameters":
        if self.omega_W is None and self.P is None:
            raise ValueError("one of omega_W or P is required")
        return self


class XiSweepParameters(ExperimentParameters):
    kappa: list[float] = Field(..., min_length=1)
    site: int = Field(default=4, ge=2)
    omega_W: float = Field(default=1.0, gt=0)
    gamma_A: float = Field(default=1.0, gt=0)
    M: Optional[int] = Field(default=None, ge=1)
    cutoff: Optional[int] = Field(default=None, ge=1)


class LiebCouplingParameters(ExperimentParameters):
    a: list[float] = Field(..., min_length=1)
    j_max: int = Field(default=5, ge=0)
    kappa_prime: float = Field(default=0.5, ge=0)


class InteractionTableParameters(ExperimentParameters):
    index_bound: int = Field(default=2, ge=2)
    sublattices: list[Literal["A", "B"]] = Field(default_factory=lambda: ["A", "B"])
    n_points: Optional[int] = Field(default=None, ge=4)


class ThresholdMapParameters(ExperimentParameters):
    U0: list[float] = Field(..., min_length=1)
    omega: list[float] = Field(default_factory=lambda: [1.0])
    gamma0: float = Field(default=1.0, gt=0)
    fock_cutoff: Optional[int] = Field(default=None, ge=2)


class InteractingParameters(ExperimentParameters):
    n_sites: int = Field(default=7, ge=1)
    gamma_A: float = Field(default=1.0, gt=0)
    omega_W: float = Field(default=1.0, gt=0)
    P: Optional[float] = Field(default=None, gt=0, description="Optional site pump rate")
    cutoff: Optional[int] = Field(default=None, ge=1)
    detuning: float = 0.0
    drop_U2: bool = False


class InteractingProfileParameters(InteractingParameters):
    kappa: float = Field(..., ge=0)
    U1: Optional[float] = Field(default=None, ge=0, description="Cross-Kerr in units of gamma_A")
    U_B: Optional[float] = Field(default=None, ge=0, description="Onsite B interaction")

    @model_validator(mode="after")
    def _one_strength(self) -> "InteractingProfileParameters":
        if self.U1 is not None and self.U_B is not None:
            raise ValueError("give either U1 or U_B, not both")
        return self


class FractionMapParameters(InteractingParameters):
    kappa: list[float] = Field(..., min_length=1)
    U1: list[float] = Field(..., min_length=1)


# Shared helpers


@lru_cache(maxsize=1)
def reference_couplings() -> TruncatedCouplings:
    """B-sublattice couplings per unit U_B."""
    return truncated_couplings(build_interaction_table(index_bound=2, sublattices=("B",)))


def _couplings(
    U1: Optional[float], U_B: Optional[float], drop_U2: bool
) -> TruncatedCouplings:
    base = reference_couplings()
    if U_B is not None:
        couplings = base.scaled(U_B)
    elif U1 is not None:
        couplings = base.scaled(U1 / base.U1)
    else:
        couplings = base.scaled(0.0)
    if drop_U2:
        couplings = couplings.model_copy(update={"U2": 0.0})
    return couplings


def _drive(
    omega: Optional[float],
    pump: Optional[float],
    sublattice: Literal["A", "B"] = "B",
    cell: int = 0,
    detuning: float = 0.0,
) -> DriveSpec:
    return DriveSpec(
        coherent={0: complex(omega)} if omega else {},
        incoherent={(sublattice, cell): pump} if pump else {},
        detuning=detuning,
    )


def _gaussian_solve(
    params: GaussianParameters, kappa: float, drive: DriveSpec, convention: DecayConvention
) -> SteadyStateReport:
    kernel = sawtooth_kernel(params.gamma_A, kappa, params.cutoff)
    return solve_steady_state(
        kernel,
        drive,
        half_width=params.M,
        corr_range=params.corr_range,
        full_correlations=params.full_correlations,
        convention=convention,
    )


def _profile_tables(
    reports: dict[float, SteadyStateReport],
) -> tuple[pd.DataFrame, pd.DataFrame]:
    profiles = []
    lengths = []
    for kappa, report in reports.items():
        frame = report.density_frame()[["site", "N", "N_over_N0"]].copy()
        frame.insert(0, "kappa", kappa)
        profiles.append(frame)
        lengths.extend({"kappa": kappa, "site": s, "xi": xi} for s, xi in report.xi.items())
    return (
        pd.concat(profiles, ignore_index=True),
        pd.DataFrame(lengths, columns=["kappa", "site", "xi"]),
    )


def _dense_solve(
    params: InteractingParameters, kappa: float, couplings: TruncatedCouplings
) -> DenseSteadyState:
    cutoff = get_settings().dense_kernel_cutoff if params.cutoff is None else params.cutoff
    problem = TruncatedLindbladProblem(
        n_sites=params.n_sites,
        kernel=sawtooth_kernel(params.gamma_A, kappa, cutoff),
        drive=_drive(params.omega_W, params.P, detuning=params.detuning),
        couplings=couplings,
    )
    return steady_state(problem)


# Experiments


@experiment(
    "kernel_table",
    "Overlaps f_l and kernel rates gamma_l / gamma_A of the sawtooth chain",
    "appendix table of f_l and gamma_l / gamma_A at kappa 0.1, 0.5, 0.9 for l = 0..6",
    KernelTableParameters,
)
def kernel_table(params: KernelTableParameters, convention: DecayConvention) -> ExperimentResult:
    rows = []
    for kappa in params.kappa:
        kernel = sawtooth_kernel(params.gamma_A, kappa, max(params.l_max, 1))
        for l in range(params.l_max + 1):
            rows.append(
                {
                    "kappa": kappa,
                    "l": l,
                    "f_l": f_sawtooth(l),
                    "gamma_l_over_gamma_A": kernel.rate(l) / params.gamma_A,
                }
            )
    return ExperimentResult(tables={"kernel_table": pd.DataFrame(rows)})


@experiment(
    "wannier_table",
    "Flat-band Wannier coefficients with their orthogonality defect",
    "appendix Wannier coefficients w_A(r), w_B(r) of the sawtooth and Lieb flat bands",
    WannierTableParameters,
)
def wannier_table(params: WannierTableParameters, convention: DecayConvention) -> ExperimentResult:
    if params.lattice == "sawtooth":
        table = build_sawtooth_table(r_max=params.r_max)
    else:
        spec = LiebSpec(omega_A=0.0, omega_B=0.0, omega_C=0.0, J=np.sqrt(params.a) / 2.0, g=1.0)
        table = build_lieb_table(spec, r_max=params.r_max)
    defect = float(np.max(np.abs(orthogonality_defect(table))))
    return ExperimentResult(
        tables={"wannier_table": table.to_frame()},
        documents={"orthogonality": {"lattice": params.lattice, "max_defect": defect}},
        diagnostics={"max_orthogonality_defect": defect},
    )


@experiment(
    "density_profile_coherent",
    "Wannier-basis densities and decay lengths for a coherently driven Wannier state",
    "profile figure, panel a: log N_i / N_0 for one driven Wannier state, Omega_W = gamma_A",
    CoherentProfileParameters,
)
def density_profile_coherent(
    params: CoherentProfileParameters, convention: DecayConvention
) -> ExperimentResult:
    drive = _drive(params.omega_W, None, detuning=params.detuning)
    reports = {k: _gaussian_solve(params, k, drive, convention) for k in params.kappa}
    profile, lengths = _profile_tables(reports)
    return ExperimentResult(
        tables={"density_profile": profile, "decay_lengths": lengths},
        diagnostics={
            f"kappa={k}": report.diagnostics for k, report in reports.items()
        },
    )


@experiment(
    "density_profile_incoherent",
    "Wannier-basis densities and decay lengths for an incoherent site-basis pump",
    "profile figure, panel c: log N_i / N_0 under an incoherent B-site pump at cell 0",
    IncoherentProfileParameters,
)
def density_profile_incoherent(
    params: IncoherentProfileParameters, convention: DecayConvention
) -> ExperimentResult:
    drive = _drive(None, params.P, params.pump_sublattice, params.pump_cell)
    reports = {k: _gaussian_solve(params, k, drive, convention) for k in params.kappa}
    profile, lengths = _profile_tables(reports)
    return ExperimentResult(
        tables={"density_profile": profile, "decay_lengths": lengths},
        diagnostics={
            f"kappa={k}": report.diagnostics for k, report in reports.items()
        },
    )


@experiment(
    "site_basis_profile",
    "Per-cell A and B site densities of a driven steady state",
    "profile figure, panel b: B-sublattice site densities for the same drive as panel a",
    SingleStateParameters,
)
def site_basis_profile(
    params: SingleStateParameters, convention: DecayConvention
) -> ExperimentResult:
    drive = _drive(params.omega_W, params.P, params.pump_sublattice, params.pump_cell)
    report = _gaussian_solve(params, params.kappa, drive, convention)
    frame = pd.DataFrame({"cell": report.cells})
    for name, values in report.site_densities.items():
        frame[f"n_{name}"] = values
    keep = np.abs(frame["cell"]) <= params.window
    return ExperimentResult(
        tables={"site_basis_profile": frame[keep].reset_index(drop=True)},
        documents={"summary": report.summary()},
        diagnostics=report.diagnostics,
    )


@experiment(
    "g1_map",
    "First-order coherence g1(j, l) of a Gaussian steady state",
    "coherence map g1(j, l) of the incoherently pumped chain at kappa = 0.1",
    SingleStateParameters,
)
def g1_map(params: SingleStateParameters, convention: DecayConvention) -> ExperimentResult:
    drive = _drive(params.omega_W, params.P, params.pump_sublattice, params.pump_cell)
    report = _gaussian_solve(params, params.kappa, drive, convention)
    frame = report.g1_frame()
    keep = (np.abs(frame["j"]) <= params.window) & (np.abs(frame["l"]) <= params.window)
    return ExperimentResult(
        tables={"g1": frame[keep].reset_index(drop=True)},
        documents={"summary": report.summary()},
        diagnostics=report.diagnostics,
    )


@experiment(
    "xi_sweep",
    "Exact, effective-drive and direct-coupling decay lengths over kappa",
    "decay length xi_4 versus kappa: exact, effective-drive and direct-coupling curves",
    XiSweepParameters,
)
def xi_sweep(params: XiSweepParameters, convention: DecayConvention) -> ExperimentResult:
    frame = xi_comparison(
        params.kappa,
        site=params.site,
        omega=params.omega_W,
        gamma_A=params.gamma_A,
        cutoff=params.cutoff,
        half_width=params.M,
        convention=convention,
    )
    return ExperimentResult(tables={"xi_sweep": frame})


@experiment(
    "lieb_couplings",
    "Lieb-chain overlaps f_j(a), C-sublattice sums and kernel rates",
    "Lieb-chain coupling figure: |gamma_j| versus distance for several a = (2J/g)^2",
    LiebCouplingParameters,
)
def lieb_couplings(
    params: LiebCouplingParameters, convention: DecayConvention
) -> ExperimentResult:
    rows = []
    for a in params.a:
        kernel = lieb_kernel(1.0, params.kappa_prime, a, max(params.j_max, 1))
        for j in range(params.j_max + 1):
            rows.append(
                {
                    "a": a,
                    "j": j,
                    "f_j": lieb_f(j, a),
                    "c_sum": lieb_c_sum(j, a),
                    "gamma_j_over_gamma_C": kernel.rate(j),
                }
            )
    return ExperimentResult(tables={"lieb_couplings": pd.DataFrame(rows)})


@experiment(
    "interaction_table",
    "Effective Wannier-basis interaction coefficients and truncated couplings",
    "appendix leading-order interaction table and the truncated U0..U3 couplings",
    InteractionTableParameters,
)
def interaction_table(
    params: InteractionTableParameters, convention: DecayConvention
) -> ExperimentResult:
    table = build_interaction_table(
        index_bound=params.index_bound,
        sublattices=tuple(params.sublattices),
        n_points=params.n_points,
    )
    documents = {
        f"couplings_{sub}": truncated_couplings(table, sub).model_dump()
        for sub in table.sublattices
    }
    return ExperimentResult(
        tables={"interaction_table": table.to_frame()},
        documents=documents,
        diagnostics={"n_points": table.n_points},
    )


@experiment(
    "truncation_threshold_map",
    "Double occupancy of an isolated driven Kerr site over U0 and drive",
    "appendix double-occupancy landscape over U0 / Omega and gamma_0 / Omega",
    ThresholdMapParameters,
)
def truncation_threshold_map(
    params: ThresholdMapParameters, convention: DecayConvention
) -> ExperimentResult:
    rows = []
    for omega in params.omega:
        for U0 in params.U0:
            dense = truncation_threshold(U0, params.gamma0, omega, fock_cutoff=params.fock_cutoff)
            exact = kerr_correlation_exact(U0, params.gamma0, omega) if U0 > 0 else float("nan")
            rows.append(
                {
                    "omega": omega,
                    "U0": U0,
                    "gamma0": params.gamma0,
                    "double_occupancy": dense,
                    "double_occupancy_exact": exact,
                }
            )
    return ExperimentResult(tables={"truncation_threshold_map": pd.DataFrame(rows)})


@experiment(
    "interacting_profile",
    "Densities, coherence and non-local fraction of the interacting chain",
    "interacting profile at kappa = 0.2 and g1 map at U1 = 100, kappa = 0.1",
    InteractingProfileParameters,
)
def interacting_profile(
    params: InteractingProfileParameters, convention: DecayConvention
) -> ExperimentResult:
    couplings = _couplings(params.U1, params.U_B, params.drop_U2)
    state = _dense_solve(params, params.kappa, couplings)
    summary = state.summary()
    return ExperimentResult(
        tables={"density_profile": state.density_frame(), "g1": state.g1_frame()},
        documents={"summary": summary},
        diagnostics=summary["diagnostics"],
    )


@experiment(
    "f_vs_kappa_U1",
    "Non-local fraction f over a kappa by U1 grid",
    "non-local fraction f versus kappa for U1 in 10, 30, 100",
    FractionMapParameters,
)
def f_vs_kappa_U1(params: FractionMapParameters, convention: DecayConvention) -> ExperimentResult:
    rows = []
    for kappa in params.kappa:
        for U1 in params.U1:
            state = _dense_solve(params, kappa, _couplings(U1, None, params.drop_U2))
            rows.append(
                {
                    "kappa": kappa,
                    "U1": U1,
                    "f": nonlocal_fraction(state),
                    "residual": state.residual,
                }
            )
    return ExperimentResult(tables={"f_vs_kappa_U1": pd.DataFrame(rows)})
