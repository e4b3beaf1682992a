"""Exception types shared across the package.

Each maps to a CLI exit code (see :mod:`asymtsp.cli`).
"""


class AsymTSPError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ParseError(AsymTSPError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapacityError(AsymTSPError):
    """An exact subroutine was asked to solve something above its size cap."""

    exit_code = 3


class ValidationError(AsymTSPError):
    exit_code = 4


class NotMetricError(ValidationError):
    """Raised by algorithms whose guarantees need the triangle inequality."""
