"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class NumericalOverflowError(ArithmeticError):
    """A computation produced non-finite values."""

    def __init__(self, message, t=None, dt=None):
        super().__init__(message)
        self.t = t
        self.dt = dt


class OutOfDomainError(ValueError):
    """Evaluation requested outside the domain where a quantity is defined."""

    def __init__(self, message, which=None):
        super().__init__(message)
        self.which = which


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""
