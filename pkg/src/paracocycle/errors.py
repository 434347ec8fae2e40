"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class CocycleError(Exception):
    exit_code = 1


class InvalidInputError(CocycleError, ValueError):
    exit_code = 1


class DivergenceError(InvalidInputError):
    """A series or partition sum that only converges for t < -1 was requested outside that range."""


class InfeasibleError(InvalidInputError):
    pass


class ResourceLimitError(CocycleError):
    exit_code = 2


class PrecisionError(CocycleError):
    exit_code = 2


class PropertyViolation(CocycleError):
    exit_code = 3

    def __init__(self, message: str, counterexample: object = None):
        super().__init__(message)
        self.counterexample = counterexample


class ConvergenceError(CocycleError):
    exit_code = 4

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
