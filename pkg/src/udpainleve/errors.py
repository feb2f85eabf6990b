"""Exception hierarchy shared by the numeric and exact layers."""


class UdPainleveError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(UdPainleveError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class InvalidInputError(DomainError):
    """A value cannot be represented (e.g. non-finite log-magnitude)."""


class UnsupportedSizeError(DomainError):
    """Determinant order beyond what Leibniz expansion is allowed to handle."""


class TruncationError(UdPainleveError, ArithmeticError):
    """A series hit its term cap before the tail criterion fired."""


class SingularPointError(UdPainleveError, ZeroDivisionError):
    """A denominator vanished (or could not be resolved from zero)."""


class ConsistencyError(UdPainleveError, RuntimeError):
    """An internal identity that must hold exactly was violated."""
