"""Single driven-dissipative Kerr site: validity of the single-excitation truncation.

An isolated Wannier mode with onsite interaction U0, loss gamma0 and drive
Omega obeys

    H = Delta a^dag a + U0 a^dag a^dag a a + (Omega a + conj(Omega) a^dag) / 2
    L = sqrt(2 gamma0) a

Its double occupancy <a^dag a^dag a a> bounds the error of dropping states with
more than one excitation per site.
"""

import math
from typing import Optional

import numpy as np
import scipy.optimize
import scipy.sparse
from numpy.typing import NDArray

from src.errors import FockCutoffInsufficient, InvalidParameter
from src.utils.config import get_settings
from src.utils.logging import setup_logging
from src.utils.superoperator import liouvillian, null_state

logger = setup_logging(__name__)

RELATIVE_CHANGE = 0.01
SERIES_LIMIT = 10_000


def annihilation(cutoff: int) -> scipy.sparse.csr_matrix:
    """Bosonic a on the Fock states 0..cutoff."""
    if cutoff < 1:
        raise InvalidParameter(f"Fock cutoff must be at least 1, got {cutoff}")
    return scipy.sparse.diags(np.sqrt(np.arange(1, cutoff + 1)), offsets=1, format="csr")


def kerr_steady_state(
    U0: float,
    gamma0: float,
    omega: complex,
    cutoff: int,
    detuning: float = 0.0,
) -> NDArray[np.complex128]:
    """Density matrix of the driven Kerr mode on Fock states 0..cutoff."""
    a = annihilation(cutoff).astype(np.complex128)
    a_dag = a.conj().T
    hamiltonian = (
        detuning * (a_dag @ a)
        + U0 * (a_dag @ a_dag @ a @ a)
        + 0.5 * (omega * a + np.conj(omega) * a_dag)
    )
    generator = liouvillian(hamiltonian, [(gamma0, a)])
    return null_state(generator, cutoff + 1).rho


def kerr_correlation_dense(
    U0: float,
    gamma0: float,
    omega: complex,
    cutoff: int,
    order: int = 2,
    detuning: float = 0.0,
) -> float:
    """<(a^dag)^order a^order> from the truncated Fock-space steady state."""
    rho = kerr_steady_state(U0, gamma0, omega, cutoff, detuning)
    a = annihilation(cutoff).toarray()
    lowered = np.linalg.matrix_power(a, order)
    return float(np.real(np.trace(rho @ lowered.conj().T @ lowered)))


def truncation_threshold(
    U0: float,
    gamma0: float,
    omega: complex,
    detuning: float = 0.0,
    fock_cutoff: Optional[int] = None,
    max_doublings: int = 3,
) -> float:
    """
    Double occupancy <W^dag W^dag W W> of an isolated driven Kerr site.

    The Fock cutoff is doubled until two successive values agree within 1%.

    Args:
        U0: Onsite interaction
        gamma0: Local loss rate (> 0)
        omega: Drive amplitude (non-zero)
        detuning: Drive detuning
        fock_cutoff: Initial cutoff (defaults to settings.fock_cutoff)
        max_doublings: Largest number of cutoff doublings

    Returns:
        Double occupancy at the converged cutoff

    Raises:
        FockCutoffInsufficient: If the value still changes by more than 1% after
            max_doublings doublings
    """
    if gamma0 <= 0:
        raise InvalidParameter(f"gamma0 must be positive, got {gamma0}")
    if omega == 0:
        raise InvalidParameter("omega must be non-zero")
    if U0 < 0:
        raise InvalidParameter(f"U0 must be non-negative, got {U0}")

    cutoff = get_settings().fock_cutoff if fock_cutoff is None else fock_cutoff
    value = kerr_correlation_dense(U0, gamma0, omega, cutoff, detuning=detuning)
    for attempt in range(max_doublings):
        finer = kerr_correlation_dense(U0, gamma0, omega, 2 * cutoff, detuning=detuning)
        change = abs(finer - value)
        if change <= RELATIVE_CHANGE * abs(finer):
            logger.debug(
                f"Kerr threshold at U0={U0}: {finer:.6e} (cutoff {2 * cutoff}, change {change:.2e})"
            )
            return finer
        if attempt + 1 < max_doublings:
            logger.warning(
                f"Fock cutoff {cutoff} -> {2 * cutoff} changed <W^dag W^dag W W> by "
                f"{change:.3e}; doubling again"
            )
        value, cutoff = finer, 2 * cutoff

    raise FockCutoffInsufficient(
        f"<W^dag W^dag W W> not converged at Fock cutoff {cutoff} for U0={U0}, "
        f"gamma0={gamma0}, omega={omega}"
    )


def _pochhammer(c: complex, n: int) -> complex:
    value = 1.0 + 0.0j
    for k in range(n):
        value *= c + k
    return value


def hypergeometric_0f2(a: complex, b: complex, z: float) -> complex:
    """Series for 0F2(; a, b; z)."""
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    for n in range(SERIES_LIMIT):
        term *= z / ((n + 1) * (a + n) * (b + n))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise FockCutoffInsufficient(f"0F2 series did not converge in {SERIES_LIMIT} terms (z={z})")


def kerr_correlation_exact(
    U0: float,
    gamma0: float,
    omega: complex,
    order: int = 2,
    detuning: float = 0.0,
) -> float:
    """
    Closed-form <(a^dag)^n a^n> of the driven Kerr mode from the complex-P solution.

    With c = (Delta - i gamma0) / U0 and z = |Omega|^2 / (2 U0^2),

        <(a^dag)^n a^n> = |Omega / (2 U0)|^(2n) / |(c)_n|^2
                          * 0F2(c + n, c* + n; z) / 0F2(c, c*; z).
    """
    if U0 <= 0:
        raise InvalidParameter(f"the closed form needs U0 > 0, got {U0}")
    if gamma0 <= 0:
        raise InvalidParameter(f"gamma0 must be positive, got {gamma0}")

    c = complex(detuning, -gamma0) / U0
    z = abs(omega) ** 2 / (2.0 * U0**2)
    prefactor = (abs(omega) / (2.0 * U0)) ** (2 * order) / abs(_pochhammer(c, order)) ** 2
    ratio = hypergeometric_0f2(c + order, c.conjugate() + order, z) / hypergeometric_0f2(
        c, c.conjugate(), z
    )
    return float(prefactor * ratio.real)


def minimum_onsite_interaction(
    gamma0: float,
    omega: complex,
    bound: float = 1e-4,
    detuning: float = 0.0,
    bracket: tuple[float, float] = (1e-3, 1e6),
) -> float:
    """
    Smallest U0 whose double occupancy does not exceed ``bound``.

    Root of log <a^dag a^dag a a>(U0) = log bound on a logarithmic U0 axis.

    Raises:
        InvalidParameter: If the bound is not crossed inside the bracket
    """
    if bound <= 0:
        raise InvalidParameter(f"bound must be positive, got {bound}")

    def excess(log_u: float) -> float:
        value = kerr_correlation_exact(10.0**log_u, gamma0, omega, detuning=detuning)
        return math.log(value) - math.log(bound)

    lower, upper = math.log10(bracket[0]), math.log10(bracket[1])
    if excess(lower) <= 0:
        raise InvalidParameter(f"double occupancy is already below {bound} at U0={bracket[0]}")
    if excess(upper) > 0:
        raise InvalidParameter(f"double occupancy stays above {bound} up to U0={bracket[1]}")
    root = float(scipy.optimize.brentq(excess, lower, upper, xtol=1e-12))
    logger.info(f"Truncation needs U0 >= {10.0**root:.6g} for double occupancy <= {bound}")
    return 10.0**root
