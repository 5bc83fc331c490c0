"""Scalar special functions: Γ, Pochhammer and the ₀F₃ series.

Double-precision paths go through :mod:`scipy.special`; the ₀F₃ series is
summed term by term into a compensated :class:`shewchuk.Expansion`. The
``*_wide`` variants evaluate the same quantities with :mod:`mpmath` at a
caller-chosen number of significant digits.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

import mpmath
from scipy import special
from shewchuk import Expansion

from .constants import DEFAULT_SERIES_TOL, MAX_SERIES_TERMS
from .errors import DomainError, IterationLimitError, RangeError

logger = logging.getLogger(__name__)

Real = Union[float, int, Fraction]


@dataclass(frozen=True, slots=True)
class SeriesValue:
    """Value of a truncated series with its bookkeeping."""

    value: float
    terms_used: int
    truncation_bound: float
    cancellation_digits: float = 0.0

    def as_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "termsUsed": self.terms_used,
            "truncationBound": self.truncation_bound,
            "cancellationDigits": self.cancellation_digits,
        }


def _is_pole(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def gamma_fn(x: Real) -> float:
    """Γ(x) for real x off the non-positive integers."""
    xf = float(x)
    if _is_pole(xf):
        raise DomainError(f"gamma has a pole at x={xf:g}")
    value = float(special.gamma(xf))
    if not math.isfinite(value):
        raise RangeError(f"gamma({xf:g}) overflows double precision")
    return value


def pochhammer(a: Real, k: int) -> float:
    """Rising factorial (a)_k = a(a+1)...(a+k-1); (a)_0 = 1."""
    if k < 0:
        raise DomainError(f"pochhammer needs k >= 0, got {k}")
    if k == 0:
        return 1.0
    value = float(special.poch(float(a), k))
    if not math.isfinite(value):
        raise RangeError(f"pochhammer({float(a):g}, {k}) overflows double precision")
    return value


def _check_parameters(*bs: float) -> None:
    for b in bs:
        if _is_pole(float(b)):
            raise DomainError(f"0F3 lower parameter {float(b):g} is a non-positive integer")


def hyper0f3(
    b1: Real,
    b2: Real,
    b3: Real,
    z: float,
    tol: float = DEFAULT_SERIES_TOL,
    *,
    max_terms: int = MAX_SERIES_TERMS,
) -> SeriesValue:
    """Sum ₀F₃(;b1,b2,b3;z) = Σ z^k / ((b1)_k (b2)_k (b3)_k k!).

    Summation stops once two consecutive terms fall below ``tol`` times the
    partial sum; ``truncation_bound`` is the first term left out.
    """
    if not tol > 0:
        raise DomainError(f"series tolerance must be positive, got {tol}")
    c1, c2, c3 = float(b1), float(b2), float(b3)
    _check_parameters(c1, c2, c3)
    z = float(z)
    if z == 0.0:
        return SeriesValue(value=1.0, terms_used=1, truncation_bound=0.0)

    acc = Expansion(1.0)
    term = 1.0
    largest = 1.0
    small_run = 0
    for k in range(max_terms):
        term *= z / ((c1 + k) * (c2 + k) * (c3 + k) * (k + 1))
        acc = acc + term
        partial = float(acc)
        if not math.isfinite(partial):
            raise RangeError(f"0F3 series overflows at z={z:g}")
        largest = max(largest, abs(partial))
        small_run = small_run + 1 if abs(term) < tol * abs(partial) else 0
        if small_run == 2:
            neglected = term * z / ((c1 + k + 1) * (c2 + k + 1) * (c3 + k + 1) * (k + 2))
            value = float(acc)
            lost = math.log10(largest / abs(value)) if value != 0.0 else math.inf
            return SeriesValue(
                value=value,
                terms_used=k + 2,
                truncation_bound=abs(neglected),
                cancellation_digits=max(0.0, lost),
            )
    raise IterationLimitError(
        f"0F3(;{c1:g},{c2:g},{c3:g};{z:g}) did not converge within {max_terms} terms"
    )


def to_mpf(x: Real) -> mpmath.mpf:
    """Exact conversion of rationals into the current mpmath context."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def hyper0f3_wide(b1: Real, b2: Real, b3: Real, z: Any, digits: int) -> mpmath.mpf:
    """₀F₃ evaluated with ``digits`` significant digits (wide accumulator)."""
    _check_parameters(float(b1), float(b2), float(b3))
    with mpmath.workdps(digits):
        return +mpmath.hyper([], [to_mpf(b1), to_mpf(b2), to_mpf(b3)], z)


def gamma_wide(x: Real, digits: int) -> mpmath.mpf:
    """Γ(x) with ``digits`` significant digits."""
    if _is_pole(float(x)):
        raise DomainError(f"gamma has a pole at x={float(x):g}")
    with mpmath.workdps(digits):
        return +mpmath.gamma(to_mpf(x))
