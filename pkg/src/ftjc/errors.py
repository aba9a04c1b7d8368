"""Exception hierarchy.

Everything raised deliberately by this library derives from FtjcError, so
callers can catch one base class. Each subclass also derives from the
closest builtin category (ValueError for bad inputs, ArithmeticError for
numerical failures, RuntimeError for resolvable runtime conditions) so that
generic handlers keep working.
"""

from __future__ import annotations


class FtjcError(Exception):
    """Base class for all library errors."""


class InputError(FtjcError, ValueError):
    """An argument is outside the documented domain of a function."""


class DomainError(FtjcError, ValueError):
    """A mathematical function was evaluated at a point where it is undefined."""


class ConfigError(FtjcError, ValueError):
    """A sweep configuration is inconsistent or incomplete."""


class PresetError(FtjcError, KeyError):
    """An unknown preset name was requested."""


class CutoffError(FtjcError, ValueError):
    """A Fock-space truncation drops more probability than allowed."""


class SectorError(FtjcError, ValueError):
    """A state has weight outside the sector required by the operation."""


class EvaluationError(FtjcError, ArithmeticError):
    """A special-function evaluation could not reach the requested accuracy.

    Carries the best value obtained (or None) and the honest relative error
    estimate that was achieved, so callers can decide whether the result is
    still usable for their purpose.
    """

    def __init__(self, message: str, value: complex | None = None,
                 est_rel_err: float = float("inf")):
        super().__init__(message)
        self.value = value
        self.est_rel_err = est_rel_err


class GridCoarseError(FtjcError, RuntimeError):
    """A phase-unwrapping step exceeded the trusted jump bound.

    The time grid is too coarse to track a continuous complex logarithm;
    refine the grid and retry.
    """


class DegeneracyError(FtjcError, ArithmeticError):
    """A positive-definiteness factor collapsed to zero or below."""


class ConsistencyError(FtjcError, ArithmeticError):
    """An internal cross-check failed beyond its tolerance.

    This signals accumulated round-off or a bug, never bad user input.
    """


class StepSizeError(FtjcError, RuntimeError):
    """An ODE integration lost accuracy even after automatic refinement."""


class InsufficientSpanError(FtjcError, ValueError):
    """A time series is too short to contain the requested number of peaks."""
