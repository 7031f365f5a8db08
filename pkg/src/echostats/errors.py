"""Exception and warning types raised across the package."""


class EchoStatsError(Exception):
    """Base class for package errors."""


class NoDynamicsError(EchoStatsError, ValueError):
    """Raised when h1 == h2: the echo is identically 1 and nothing evolves."""


class InsufficientStructureError(EchoStatsError, ValueError):
    """A spectral measure lacks the atoms an operation needs."""


class MeasureTooCoarseError(EchoStatsError, ValueError):
    """Pruning discarded more spectral weight than allowed."""


class ResourceGuardError(EchoStatsError, ValueError):
    """A brute-force request exceeds the enumeration size guard."""


class QuadratureError(EchoStatsError, RuntimeError):
    """Numerical quadrature failed to reach its tolerance."""

    def __init__(self, message, estimate=None, achieved=None):
        super().__init__(message)
        self.estimate = estimate
        self.achieved = achieved


class EchoUnderflowWarning(RuntimeWarning):
    """An echo value underflowed and was replaced by the smallest positive double."""


class PeakCapWarning(RuntimeWarning):
    """A density was evaluated at a logarithmic peak and capped."""
