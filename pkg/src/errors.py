"""Exception hierarchy shared by every simulator module."""

from typing import Optional


class SimulationError(Exception):
    """Base exception for simulator errors."""

    pass


# Convergence failures


class ConvergenceError(SimulationError):
    """Exception for numerical procedures that failed a refinement check."""

    pass


class QuadratureNotConverged(ConvergenceError):
    """Exception raised when grid refinement changes an integral beyond tolerance."""

    def __init__(self, message: str, change: float = float("nan")) -> None:
        super().__init__(message)
        self.change = change


class FockCutoffInsufficient(ConvergenceError):
    """Exception raised when doubling the Fock cutoff still changes an observable."""

    pass


# Numerical failures


class NumericalError(SimulationError):
    """Exception for ill-posed or unstable numerical problems."""

    pass


class KernelNotPositive(NumericalError):
    """Exception raised when a dissipation kernel has a significantly negative eigenvalue."""

    def __init__(self, message: str, eigenvalue: float = float("nan")) -> None:
        super().__init__(message)
        self.eigenvalue = eigenvalue


class SingularDrift(NumericalError):
    """Exception raised when the first-moment drift matrix cannot be inverted reliably."""

    def __init__(self, message: str, condition_number: float = float("inf")) -> None:
        super().__init__(message)
        self.condition_number = condition_number


class UnstablePump(NumericalError):
    """Exception raised when incoherent gain exceeds loss and moments grow without bound."""

    def __init__(self, message: str, abscissa: float = float("nan")) -> None:
        super().__init__(message)
        self.abscissa = abscissa


class DegenerateSteadyState(NumericalError):
    """Exception raised when the Liouvillian kernel is more than one-dimensional."""

    def __init__(self, message: str, eigenvalues: Optional[tuple[float, float]] = None) -> None:
        super().__init__(message)
        self.eigenvalues = eigenvalues


class DegenerateDenominator(NumericalError):
    """Exception raised when an approximate model hits a vanishing denominator."""

    pass


class ZeroDensitySite(NumericalError):
    """Exception raised when a normalized correlator is requested on an empty site."""

    pass


class ZeroTotalDensity(NumericalError):
    """Exception raised when a fraction of the total density is taken of an empty state."""

    pass


class NonPositiveDensity(NumericalError):
    """Exception raised when a logarithmic decay length meets a non-positive density."""

    pass


class NegativeHoppingRate(NumericalError):
    """Exception raised when the diffusion picture needs a positive nearest-neighbour rate."""

    pass


class ResidualTooLarge(NumericalError):
    """Exception raised when a steady state does not satisfy L(rho) = 0 to tolerance."""

    def __init__(self, message: str, residual: float = float("nan")) -> None:
        super().__init__(message)
        self.residual = residual


# Invalid input


class InputError(SimulationError, ValueError):
    """Exception for inputs that violate a model precondition."""

    pass


class InvalidParameter(InputError):
    """Exception raised when an argument is outside the range an operation accepts."""

    pass


class FlatBandViolation(InputError):
    """Exception raised when lattice parameters do not produce an exactly flat band."""

    pass


class DimensionTooLarge(InputError):
    """Exception raised when a dense problem exceeds the supported Hilbert-space size."""

    pass


class MissingEntry(InputError, KeyError):
    """Exception raised when a table lacks an entry a derived quantity needs."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class ConfigInvalid(InputError):
    """Exception raised for unreadable, incomplete or inconsistent experiment configs."""

    pass


class ExperimentFailed(SimulationError):
    """Exception raised when an experiment aborts; the cause is chained."""

    def __init__(self, experiment: str, message: str) -> None:
        super().__init__(f"{experiment}: {message}")
        self.experiment = experiment
