"""
Error types raised by the lab services.

Services raise these; management commands and API views translate them
into exit codes and error envelopes.
"""
from typing import Optional


class LabError(Exception):
    """Base class for every error raised by the lab."""


class InvalidParameterError(LabError, ValueError):
    """A parameter or configuration value violates its type invariants."""


class DomainError(LabError, ValueError):
    """A function was evaluated outside its domain."""


class InvalidConstructionError(LabError, ValueError):
    """A history constructor's preconditions do not hold."""


class ContractViolation(LabError, ValueError):
    """The caller broke an operation's contract (arity, grid size, ...)."""


class ConvergenceError(LabError, ArithmeticError):
    """A root finder did not reach the requested accuracy."""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class HistorySpecError(LabError, ValueError):
    """A history mini-language string could not be parsed."""

    def __init__(self, message: str, token: str):
        super().__init__(f"{message}: '{token}'")
        self.token = token
