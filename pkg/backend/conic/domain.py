"""Value types shared across the package: the azimuthal number m and radial spinors."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import DomainError, ParseError, RangeError

_M_PATTERN = re.compile(r"^\s*([+-]?)\s*(\d+)\s*/\s*2\s*$")

HALF_ODD_MESSAGE = "m must be a half-odd integer written as ±odd/2 (e.g. 1/2, -3/2)"


@dataclass(frozen=True, slots=True)
class AzimuthalNumber:
    """Half-odd-integer eigenvalue m of J₃, stored exactly as numerator/2.

    An even numerator is rejected at construction, so integer m (whose
    spinor would change sign around the crossing) cannot be represented.
    """

    numerator: int

    def __post_init__(self) -> None:
        if isinstance(self.numerator, bool) or not isinstance(self.numerator, int):
            raise DomainError(f"numerator must be an int, got {self.numerator!r}")
        if self.numerator % 2 == 0:
            raise DomainError(f"{HALF_ODD_MESSAGE}; numerator {self.numerator} is even")

    @classmethod
    def parse(cls, text: str) -> AzimuthalNumber:
        match = _M_PATTERN.match(text)
        if match is None:
            raise ParseError(f"cannot parse m={text!r}: {HALF_ODD_MESSAGE}")
        sign, digits = match.groups()
        numerator = int(digits) * (-1 if sign == "-" else 1)
        if numerator % 2 == 0:
            raise ParseError(f"cannot parse m={text!r}: {HALF_ODD_MESSAGE}")
        return cls(numerator)

    @classmethod
    def from_fraction(cls, value: Fraction | float) -> AzimuthalNumber:
        doubled = Fraction(value) * 2
        if doubled.denominator != 1:
            raise DomainError(f"{HALF_ODD_MESSAGE}; got {value}")
        return cls(int(doubled))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, 2)

    @property
    def value(self) -> float:
        return self.numerator / 2

    @property
    def is_positive(self) -> bool:
        return self.numerator > 0

    @property
    def lower_phase(self) -> int:
        """Integer m - 1/2, the angular winding of the upper component."""
        return (self.numerator - 1) // 2

    @property
    def upper_phase(self) -> int:
        """Integer m + 1/2, the angular winding of the lower component."""
        return (self.numerator + 1) // 2

    def __neg__(self) -> AzimuthalNumber:
        return AzimuthalNumber(-self.numerator)

    def __abs__(self) -> AzimuthalNumber:
        return AzimuthalNumber(abs(self.numerator))

    def __str__(self) -> str:
        return f"{self.numerator}/2"


@dataclass(frozen=True, slots=True)
class Spinor2:
    """Radial components (φ₁, φ₂) at one value of ρ."""

    phi1: float
    phi2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.phi1) and math.isfinite(self.phi2)):
            raise RangeError(f"non-finite spinor components ({self.phi1}, {self.phi2})")

    def swap(self) -> Spinor2:
        return Spinor2(self.phi2, self.phi1)

    def norm(self) -> float:
        return math.hypot(self.phi1, self.phi2)

    def as_tuple(self) -> tuple[float, float]:
        return (self.phi1, self.phi2)

    def as_dict(self) -> dict[str, Any]:
        return {"phi1": self.phi1, "phi2": self.phi2}
