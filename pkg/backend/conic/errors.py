"""Exception hierarchy shared by the library, the CLI and the HTTP app."""

from __future__ import annotations

from typing import ClassVar

from .constants import EXIT_CONSISTENCY, EXIT_DOMAIN, EXIT_IO, EXIT_PARSE, EXIT_PRECISION


class ConicError(Exception):
    """Base class; carries the CLI exit code and the HTTP status."""

    exit_code: ClassVar[int] = 1
    http_status: ClassVar[int] = 500
    kind: ClassVar[str] = "error"


class ParseError(ConicError, ValueError):
    exit_code = EXIT_PARSE
    http_status = 422
    kind = "parse"


class DomainError(ConicError, ValueError):
    exit_code = EXIT_DOMAIN
    http_status = 422
    kind = "domain"


class ConfigError(DomainError):
    """Malformed or out-of-range settings."""


class PrecisionError(ConicError, ArithmeticError):
    exit_code = EXIT_PRECISION
    http_status = 422
    kind = "precision"


class IterationLimitError(PrecisionError):
    """A series did not converge within its term cap."""


class RangeError(PrecisionError):
    """Floating point overflow."""


class FitError(PrecisionError):
    """Least-squares design matrix is ill-conditioned."""


class StiffnessError(PrecisionError):
    """The ODE integrator's step size underflowed."""


class ConsistencyError(ConicError):
    """Series and far-field branches of F_c disagree on their overlap."""

    exit_code = EXIT_CONSISTENCY
    http_status = 500
    kind = "consistency"


class OutputError(ConicError, OSError):
    """A result file could not be written."""

    exit_code = EXIT_IO
    http_status = 500
    kind = "io"
