"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a function is defined."""


class ConvergenceError(ArithmeticError):
    """An iterative method exhausted its iteration budget."""


class UnsupportedFamilyError(ValueError):
    """The operation is not defined for the requested prior family."""


class DimensionMismatchError(ValueError):
    pass


class ZeroVectorError(DomainError):
    pass


class AntiparallelError(DomainError):
    """Spherical interpolation between (nearly) opposite vectors is undefined."""
