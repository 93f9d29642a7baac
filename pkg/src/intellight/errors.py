"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the region where an operation is defined."""


class TruncationError(RuntimeError):
    """A truncated basis is too small for the requested accuracy."""


class SingularityError(ArithmeticError):
    """A closed-form expression hit a zero denominator."""


class ConsistencyError(RuntimeError):
    """Two routes that must agree did not."""
