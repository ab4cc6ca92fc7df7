"""Exception types shared across the toolkit."""


class HolonumError(Exception):
    """Base class for all toolkit errors."""


class DomainError(HolonumError, ValueError):
    """Input violates an operation's precondition."""


class SingularInverseError(DomainError):
    """Series inversion attempted on a series with vanishing constant term."""


class ToleranceNotMet(HolonumError):
    """Quadrature or iteration exhausted its budget.

    Carries the best available estimate so callers can decide whether the
    partial result is still usable.
    """

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class ConvergenceError(HolonumError):
    """Iterative solver failed to converge within its budget."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class InconclusiveError(HolonumError):
    """A numerical check produced a value too ambiguous to act on."""
