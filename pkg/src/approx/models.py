"""Analytic mobility models: diffusion, direct nonlocal coupling and effective drive.

Each model turns the first few kernel rates into a decay-length prediction
that can be compared with the exact Gaussian solution.
"""

import math
from typing import Literal, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from src.dissipation.kernel import DissipationKernel, sawtooth_kernel
from src.errors import DegenerateDenominator, InvalidParameter, NegativeHoppingRate
from src.gaussian.moments import DriveSpec
from src.gaussian.observables import DecayConvention
from src.gaussian.steady_state import solve_steady_state
from src.utils.logging import setup_logging

logger = setup_logging(__name__)


class ModelPrediction(BaseModel):
    """Decay-length prediction of one analytic model."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    model: Literal["diffusion", "direct", "effective_drive"]
    xi: float = Field(..., description="Decay length, or inf when undefined")
    aux: dict[str, float] = Field(default_factory=dict)


def _xi_from_ratio(ratio: float, convention: DecayConvention) -> float:
    log = math.log if convention == "natural" else math.log10
    step = 2.0 * abs(log(abs(ratio)))
    return math.inf if step == 0.0 else 1.0 / step


def diffusion_xi_shape(kernel: DissipationKernel) -> float:
    """
    Diffusion-picture decay length shape sqrt(gamma_1 / gamma_0).

    Raises:
        NegativeHoppingRate: If gamma_1 < 0 (kappa > 1)
    """
    gamma_0, gamma_1 = kernel.rate(0), kernel.rate(1)
    if gamma_1 < 0:
        raise NegativeHoppingRate(f"gamma_1 = {gamma_1:.6g} < 0 has no diffusion interpretation")
    return math.sqrt(gamma_1 / gamma_0)


def direct_model(
    j: int,
    kernel: DissipationKernel,
    omega: complex,
    convention: DecayConvention = "natural",
) -> ModelPrediction:
    """
    Direct nonlocal coupling from the driven site to site j.

    N_j = gamma_j^2 |Omega|^2 / (4 (gamma_0^2 - gamma_j^2)^2), and the decay length
    xi = 1 / (2 |log(gamma_{j+1} / gamma_j)|).

    Args:
        j: Target site (non-zero)
        kernel: Dissipation kernel with cutoff >= |j| + 1
        omega: Drive amplitude on the Wannier mode at site 0
        convention: Logarithm used for xi

    Returns:
        ModelPrediction with aux density_exact and density_approx
    """
    if j == 0:
        raise InvalidParameter("direct model needs a site j != 0")
    if abs(j) + 1 > kernel.cutoff:
        raise InvalidParameter(f"kernel cutoff {kernel.cutoff} does not reach site {abs(j) + 1}")

    gamma_0, gamma_j, gamma_next = kernel.rate(0), kernel.rate(j), kernel.rate(abs(j) + 1)
    drive = abs(omega) ** 2
    density = gamma_j**2 * drive / (4.0 * (gamma_0**2 - gamma_j**2) ** 2)
    approx = gamma_j**2 * drive / (4.0 * gamma_0**4)

    xi = math.inf if gamma_j == 0.0 else _xi_from_ratio(gamma_next / gamma_j, convention)
    return ModelPrediction(
        model="direct", xi=xi, aux={"density_exact": density, "density_approx": approx}
    )


def effective_drive_model(
    j: int,
    kernel: DissipationKernel,
    omega: complex,
    convention: DecayConvention = "natural",
) -> ModelPrediction:
    """
    Effective-drive model: the driven site feeds the pair (j, j+1).

    The driven amplitude comes from the three-site problem {-1, 0, 1}; it then
    acts as a drive on sites j and j+1 whose amplitudes and correlations are
    solved in closed form.

    Args:
        j: First site of the pair (j >= 2)
        kernel: Dissipation kernel with cutoff >= j + 1
        omega: Drive amplitude on the Wannier mode at site 0
        convention: Logarithm used for xi

    Returns:
        ModelPrediction; aux holds the driven amplitude, the pair densities and
        the decay length implied by those densities

    Raises:
        DegenerateDenominator: If gamma_0^2 = 2 gamma_1^2 or the xi ratio is singular
    """
    if j < 2:
        raise InvalidParameter(f"effective drive model needs j >= 2, got {j}")
    if j + 1 > kernel.cutoff:
        raise InvalidParameter(f"kernel cutoff {kernel.cutoff} does not reach site {j + 1}")

    g0, g1 = kernel.rate(0), kernel.rate(1)
    gj, gj1 = kernel.rate(j), kernel.rate(j + 1)

    pumped_denominator = g0**2 - 2.0 * g1**2
    if pumped_denominator == 0.0:
        raise DegenerateDenominator("gamma_0^2 = 2 gamma_1^2; the driven amplitude diverges")
    driven = -0.5j * g0 * np.conj(omega) / pumped_denominator

    # Effective drives, stored as Omega (not conjugated)
    drive_j = np.conj(g0 * gj * np.conj(omega) / pumped_denominator)
    drive_j1 = np.conj(g0 * gj1 * np.conj(omega) / pumped_denominator)

    pair = np.array([[g0, g1], [g1, g0]], dtype=np.complex128)
    amplitudes = np.linalg.solve(pair, -0.5j * np.array([np.conj(drive_j), np.conj(drive_j1)]))
    w_j, w_j1 = amplitudes

    def coherent(om_a: complex, x_b: complex, om_b: complex, x_a: complex) -> complex:
        return complex(0.5j * (om_a * x_b - np.conj(om_b) * np.conj(x_a)))

    # Gamma C + C Gamma = S; unknowns C_jj, C_j(j+1), C_(j+1)j, C_(j+1)(j+1)
    d = 2.0 * g0
    system = np.array(
        [
            [d, g1, g1, 0.0],
            [g1, d, 0.0, g1],
            [g1, 0.0, d, g1],
            [0.0, g1, g1, d],
        ],
        dtype=np.complex128,
    )
    rhs = np.array(
        [
            coherent(drive_j, w_j, drive_j, w_j),
            coherent(drive_j, w_j1, drive_j1, w_j),
            coherent(drive_j1, w_j, drive_j, w_j1),
            coherent(drive_j1, w_j1, drive_j1, w_j1),
        ]
    )
    correlations = np.linalg.solve(system, rhs)
    n_j, n_j1 = float(np.real(correlations[0])), float(np.real(correlations[3]))

    numerator = g0 * gj - g1 * gj1
    denominator = g1 * gj - g0 * gj1
    if denominator == 0.0 or numerator == 0.0:
        raise DegenerateDenominator(
            f"decay-length ratio is singular at j={j} (numerator {numerator:.3e}, "
            f"denominator {denominator:.3e})"
        )
    xi = _xi_from_ratio(numerator / denominator, convention)

    xi_from_densities = math.inf
    if n_j > 0 and n_j1 > 0 and n_j != n_j1:
        log = math.log if convention == "natural" else math.log10
        xi_from_densities = 1.0 / abs(log(n_j) - log(n_j1))

    return ModelPrediction(
        model="effective_drive",
        xi=xi,
        aux={
            "driven_amplitude_re": float(np.real(driven)),
            "driven_amplitude_im": float(np.imag(driven)),
            "density_j": n_j,
            "density_j_plus_1": n_j1,
            "xi_from_densities": xi_from_densities,
        },
    )


def xi_comparison(
    kappas: Sequence[float],
    site: int = 4,
    omega: complex = 1.0,
    gamma_A: float = 1.0,
    cutoff: Optional[int] = None,
    half_width: Optional[int] = None,
    convention: DecayConvention = "natural",
) -> pd.DataFrame:
    """
    Exact and model decay lengths over a kappa grid.

    Returns:
        DataFrame with columns kappa, xi_exact, xi_effective, xi_direct, diffusion_shape
    """
    rows = []
    for kappa in kappas:
        kernel = sawtooth_kernel(gamma_A, kappa, cutoff)
        report = solve_steady_state(
            kernel,
            DriveSpec.single_site(omega),
            half_width=half_width,
            full_correlations=True,
            convention=convention,
        )
        rows.append(
            {
                "kappa": kappa,
                "xi_exact": report.xi.get(site, math.nan),
                "xi_effective": effective_drive_model(site, kernel, omega, convention).xi,
                "xi_direct": direct_model(site, kernel, omega, convention).xi,
                "diffusion_shape": diffusion_xi_shape(kernel),
            }
        )
        logger.debug(f"Decay lengths at kappa={kappa}: {rows[-1]}")
    return pd.DataFrame(rows)
