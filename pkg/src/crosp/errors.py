"""Exception hierarchy shared across the package."""


class CrospError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CrospError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedSpaceError(DomainError):
    """The requested space or operation on it is not supported."""


class ConvergenceError(CrospError, ArithmeticError):
    """A series or iteration failed to reach the requested tolerance."""


class ConsistencyError(CrospError, ArithmeticError):
    """Two internal evaluation routes disagreed beyond tolerance."""
