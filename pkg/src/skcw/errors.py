"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BracketError(RuntimeError):
    """A root- or optimum-bracketing precondition failed."""


class ConvergenceError(RuntimeError):
    """An iterative solver exhausted its budget without meeting tolerance."""


class GridError(ValueError):
    """A sampling grid is invalid or too narrow for the requested accuracy."""


class EvaluationError(ArithmeticError):
    """An integrand or objective produced non-finite values."""


class ConfigError(ValueError):
    """A run configuration failed validation.

    ``field`` holds a dotted path identifying the offending entry.
    """

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
