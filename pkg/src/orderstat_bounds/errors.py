"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedRegimeError(DomainError):
    """The requested configuration has no known sharp bound."""


class NumericError(ArithmeticError):
    """An iterative numerical scheme failed to reach its target accuracy."""
