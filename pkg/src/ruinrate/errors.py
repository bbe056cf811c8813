"""Exception types raised by the library."""


class DomainError(ValueError):
    """Argument outside the domain where a quantity is finite or defined."""


class ConfigError(ValueError):
    """Invalid simulation or run configuration."""


class NoPositiveRate(ValueError):
    """The net benefit condition fails, so no positive convergence rate exists."""


class NonErgodic(NoPositiveRate):
    """The dual process has no stationary distribution."""


class NumericalError(ArithmeticError):
    """An iterative solver failed or two solvers disagreed."""
