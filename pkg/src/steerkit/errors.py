"""Exception hierarchy shared across the package.

Validation failures (bad parameters, unsupported model kinds, degenerate
inputs) are ``ValueError`` subclasses; runtime failures (instability,
numerical breakdown) are ``RuntimeError`` subclasses.  The command line
front end maps these onto distinct exit codes.
"""

from __future__ import annotations


class SteerkitError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(SteerkitError, ValueError):
    """Invalid input: a parameter, sweep definition or matrix failed validation."""


class UnsupportedParametersError(ValidationError):
    """Operation only defined on a parameter subfamily (e.g. matched rates)."""


class UnsupportedModelError(ValidationError):
    """Operation not defined for this model kind (e.g. periodic drift)."""


class DegenerateInputError(ValidationError):
    """Input is degenerate (zero variance, empty grid, ...)."""


class StabilityError(SteerkitError, RuntimeError):
    """The drift matrix is not (strictly) stable.

    Carries ``max_real_eigenvalue`` when known so callers can report how far
    from stability the model is.
    """

    def __init__(self, message: str, max_real_eigenvalue: float | None = None):
        super().__init__(message)
        self.max_real_eigenvalue = max_real_eigenvalue


class NumericalError(SteerkitError, RuntimeError):
    """A numerical routine produced an unusable result."""
