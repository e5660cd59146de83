"""
Exceptions raised by the filling-function library.

Input problems are ValueError subclasses and solver failures are RuntimeError
subclasses, so callers that only catch the builtins keep working.
"""


class FillingError(Exception):
    """Base class for every error raised by this package."""


class ChainInputError(FillingError, ValueError):
    """A chain, map or degree argument does not meet an operation's precondition."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ComplexValidationError(FillingError, ValueError):
    """A chain complex violates ∂∘∂ = 0 or has inconsistent bases."""

    def __init__(self, message: str, degree=None, cell=None):
        super().__init__(message)
        self.degree = degree
        self.cell = cell


class ComplexSyntaxError(FillingError, ValueError):
    """Text input (complex, action or chain) could not be parsed."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SolverError(FillingError, RuntimeError):
    """An internal solver step failed or an asserted invariant did not hold."""
