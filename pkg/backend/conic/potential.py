"""Lower electronic sheet E₁(r) near the crossing, closed-form or tabulated."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, ParseError

logger = logging.getLogger(__name__)

INTERIOR_SAMPLES = 257
ROOT_MERGE = 1e-12

_SPEC = re.compile(r"^\s*([a-z-]+)\s*:\s*(.*?)\s*$")


@dataclass(frozen=True, slots=True)
class PotentialCurve:
    """E₁(r) in atomic units between its two turning points.

    ``breakpoints`` lists interior points where E₁ is not smooth (kinks,
    table knots); quadrature splits there.
    """

    kind: str
    parameters: tuple[tuple[str, float], ...]
    turning_points: tuple[float, float]
    energy_fn: Callable[[Any], Any] = field(repr=False, compare=False)
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        left, right = self.turning_points
        if not left < right:
            raise DomainError(f"turning points must satisfy r_left < r_right, got {self.turning_points}")
        interior = np.linspace(left, right, INTERIOR_SAMPLES)[1:-1]
        interior = np.concatenate([interior, [b for b in self.breakpoints if left < b < right]])
        if np.any(np.asarray(self.energy_fn(interior)) >= 0):
            raise DomainError(f"E1 must be negative strictly between the turning points of {self.label}")

    def energy(self, r: Any) -> Any:
        return self.energy_fn(r)

    @property
    def label(self) -> str:
        args = ",".join(f"{name}={value:g}" for name, value in self.parameters)
        return f"{self.kind}:{args}" if args else self.kind

    def scaled(self, factor: float) -> PotentialCurve:
        """E₁ multiplied by ``factor`` > 0; turning points are unchanged."""
        if not factor > 0:
            raise DomainError(f"scale factor must be positive, got {factor}")
        base = self.energy_fn
        return PotentialCurve(
            kind=self.kind,
            parameters=self.parameters + (("scale", float(factor)),),
            turning_points=self.turning_points,
            energy_fn=lambda r: factor * base(r),
            breakpoints=self.breakpoints,
        )

    def as_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "parameters": dict(self.parameters),
            "turningPoints": list(self.turning_points),
        }

    @classmethod
    def parabolic_cone(cls, a: float) -> PotentialCurve:
        """E₁ = -r(1 - r/a) on [0, a]."""
        if not a > 0:
            raise DomainError(f"parabolic-cone needs a > 0, got {a}")
        return cls(
            kind="parabolic-cone",
            parameters=(("a", float(a)),),
            turning_points=(0.0, float(a)),
            energy_fn=lambda r: -np.asarray(r) * (1.0 - np.asarray(r) / a),
        )

    @classmethod
    def vee(cls, depth: float, width: float) -> PotentialCurve:
        """E₁ = -d + (d/w)|r - w| on [0, 2w]."""
        if not (depth > 0 and width > 0):
            raise DomainError(f"vee needs depth > 0 and width > 0, got {depth}, {width}")
        return cls(
            kind="vee",
            parameters=(("depth", float(depth)), ("width", float(width))),
            turning_points=(0.0, 2.0 * width),
            energy_fn=lambda r: -depth + (depth / width) * np.abs(np.asarray(r) - width),
            breakpoints=(float(width),),
        )

    @classmethod
    def tabulated(cls, r: Sequence[float], e1: Sequence[float]) -> PotentialCurve:
        """Monotone cubic (PCHIP) interpolant of samples; exactly two roots required."""
        r_arr = np.asarray(r, dtype=float)
        e_arr = np.asarray(e1, dtype=float)
        if r_arr.ndim != 1 or r_arr.shape != e_arr.shape or r_arr.size < 3:
            raise ParseError("a potential table needs at least 3 (r, E1) rows")
        if np.any(~np.isfinite(r_arr)) or np.any(~np.isfinite(e_arr)):
            raise ParseError("potential table contains non-finite values")
        if np.any(np.diff(r_arr) <= 0):
            raise ParseError("potential table r column must be strictly increasing")
        interpolant = PchipInterpolator(r_arr, e_arr, extrapolate=False)
        roots = np.sort(interpolant.roots(extrapolate=False))
        merged: list[float] = []
        span = r_arr[-1] - r_arr[0]
        for root in roots:
            if not merged or root - merged[-1] > ROOT_MERGE * span:
                merged.append(float(root))
        if len(merged) != 2:
            raise DomainError(f"E1 table must have exactly two turning points, found {len(merged)}")
        left, right = merged
        knots = tuple(float(k) for k in r_arr if left < k < right)
        logger.debug("tabulated potential: turning points %.10g, %.10g", left, right)
        return cls(
            kind="table",
            parameters=(("rows", float(r_arr.size)),),
            turning_points=(left, right),
            energy_fn=interpolant,
            breakpoints=knots,
        )


def load_table(path: str | Path) -> PotentialCurve:
    """Read a two-column (r, E1) text file; '#' starts a comment."""
    try:
        data = np.loadtxt(path, comments="#", ndmin=2)
    except OSError as exc:
        raise ParseError(f"cannot read potential table {path}: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"malformed potential table {path}: {exc}") from exc
    if data.shape[1] != 2:
        raise ParseError(f"potential table {path} must have two columns, found {data.shape[1]}")
    return PotentialCurve.tabulated(data[:, 0], data[:, 1])


def _keywords(body: str, expected: set[str], spec: str) -> dict[str, float]:
    values: dict[str, float] = {}
    for item in filter(None, (part.strip() for part in body.split(","))):
        name, sep, raw = item.partition("=")
        name = name.strip()
        if not sep or name not in expected or name in values:
            raise ParseError(f"bad potential spec {spec!r}: unexpected {item!r}")
        try:
            values[name] = float(raw)
        except ValueError as exc:
            raise ParseError(f"bad potential spec {spec!r}: {name} is not a number") from exc
    missing = expected - values.keys()
    if missing:
        raise ParseError(f"bad potential spec {spec!r}: missing {', '.join(sorted(missing))}")
    return values


def parse_potential(spec: str) -> PotentialCurve:
    """Build a curve from "parabolic-cone:a=<a>", "vee:depth=<d>,width=<w>" or "file:<path>"."""
    match = _SPEC.match(spec)
    if match is None:
        raise ParseError(f"bad potential spec {spec!r}: expected <kind>:<arguments>")
    kind, body = match.groups()
    if kind == "parabolic-cone":
        return PotentialCurve.parabolic_cone(_keywords(body, {"a"}, spec)["a"])
    if kind == "vee":
        values = _keywords(body, {"depth", "width"}, spec)
        return PotentialCurve.vee(values["depth"], values["width"])
    if kind == "file":
        if not body:
            raise ParseError(f"bad potential spec {spec!r}: missing path")
        return load_table(body)
    raise ParseError(f"bad potential spec {spec!r}: unknown kind {kind!r}")
