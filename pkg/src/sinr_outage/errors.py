"""Typed exceptions shared across the package.

Every failure mode callers are expected to handle gets its own class so that
capability problems (method cannot serve this model) can be told apart from
accuracy problems (method tried and failed to converge) and plain bad input.
"""

from __future__ import annotations


class OutageError(Exception):
    """Base class for all package errors."""


class DomainError(OutageError, ValueError):
    """Argument outside the mathematical domain of a function."""


class ArgumentError(OutageError, ValueError):
    """Structurally invalid argument (wrong order, wrong length, bad range)."""


class DivergenceError(OutageError):
    """A requested integral or series is infinite for these parameters."""


class StripError(OutageError):
    """Evaluation point lies outside the convergence strip of a CGF/MGF."""


class CapabilityError(OutageError):
    """The method cannot serve this model (e.g. an MGF that does not exist)."""


class AccuracyError(OutageError):
    """Computation ran but could not meet its accuracy contract.

    Carries the partial result and the error estimate so callers can decide
    whether the answer is still usable.
    """

    def __init__(self, message: str, partial=None, err_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.err_estimate = err_estimate


class SaddleError(OutageError):
    """No admissible saddle point found inside the convergence strip."""


class ConfigError(OutageError):
    """Config file failed to parse; carries the offending position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column
