"""Exception hierarchy shared by all modules."""


class FEError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FEError, ValueError):
    """A point or parameter lies outside the admissible domain."""


class ShapeError(FEError, ValueError):
    """Array lengths or matrix shapes are inconsistent."""


class DataError(FEError, ValueError):
    """A function returned a non-finite value."""


class ParameterError(FEError, ValueError):
    """Invalid combination of numeric parameters."""


class GenerationError(FEError, ValueError):
    """A node generator produced an inadmissible node set."""


class ConfigurationError(FEError, ValueError):
    """Unknown solver id, mismatched grid, or similar setup problem."""


class NumericalError(FEError, ArithmeticError):
    """A factorization failed or a matrix lost a required property."""


class InsufficientDataError(FEError, ValueError):
    """Too few points to perform a regression."""


class NotResolvedError(FEError):
    """No sample budget up to the cap reached the requested accuracy.

    The smallest error encountered is kept in ``best_error`` (with the
    ``M`` that produced it in ``best_M``).
    """

    def __init__(self, message, best_error=float("nan"), best_M=None):
        super().__init__(message)
        self.best_error = best_error
        self.best_M = best_M
