"""Independent check of the series solutions: direct integration of the radial system.

    φ₁'' = -φ₁'/ρ + ((m - 1/2)²/ρ²) φ₁ + ρ φ₂
    φ₂'' = -φ₂'/ρ + ((m + 1/2)²/ρ²) φ₂ + ρ φ₁
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .conic_core import Basis, basis_parameters
from .constants import MAX_PROPAGATION_RHO, SEED_RHO
from .domain import AzimuthalNumber, Spinor2
from .errors import DomainError, RangeError, StiffnessError

logger = logging.getLogger(__name__)

RESIDUAL_STEP = 1e-2
RESIDUAL_FLOOR = 1e-30


@dataclass(frozen=True, slots=True)
class OdeState:
    """Values and ρ-derivatives of both radial components."""

    phi1: float
    dphi1: float
    phi2: float
    dphi2: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in self.as_tuple()):
            raise RangeError(f"non-finite ODE state {self.as_tuple()}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.phi1, self.dphi1, self.phi2, self.dphi2)

    def spinor(self) -> Spinor2:
        return Spinor2(self.phi1, self.phi2)

    def as_dict(self) -> dict[str, float]:
        return {"phi1": self.phi1, "dphi1": self.dphi1, "phi2": self.phi2, "dphi2": self.dphi2}


class IntegratorConfig(BaseModel):
    """Integrator settings.

    ``abs_tol`` defaults to a value far below any state component, which makes
    the error control relative; the regular solutions start out as small as
    ρ^{m+5/2}.
    """

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=1e-11, gt=0, lt=1)
    abs_tol: float = Field(default=1e-30, gt=0)
    max_step: float = Field(default=0.01, gt=0)
    seed_rho: float = Field(default=SEED_RHO, gt=0, le=0.1)
    method: Literal["DOP853", "RK45"] = "DOP853"


def _centrifugal(m: AzimuthalNumber) -> tuple[float, float]:
    mv = m.value
    return (mv - 0.5) ** 2, (mv + 0.5) ** 2


def _second_derivatives(
    c1: float, c2: float, rho: Any, phi1: Any, dphi1: Any, phi2: Any, dphi2: Any
) -> tuple[Any, Any]:
    d2phi1 = -dphi1 / rho + c1 / rho**2 * phi1 + rho * phi2
    d2phi2 = -dphi2 / rho + c2 / rho**2 * phi2 + rho * phi1
    return d2phi1, d2phi2


def radial_rhs(m: AzimuthalNumber, rho: float, s: OdeState) -> OdeState:
    """Right-hand side of the first-order form of the radial system."""
    if not rho > 0:
        raise DomainError(f"the radial system is singular at rho={rho}")
    c1, c2 = _centrifugal(m)
    d2phi1, d2phi2 = _second_derivatives(c1, c2, rho, s.phi1, s.dphi1, s.phi2, s.dphi2)
    return OdeState(s.dphi1, d2phi1, s.dphi2, d2phi2)


def seed_state(m: AzimuthalNumber, which: Basis | str, rho: float, scale: float = 1.0) -> OdeState:
    """ℱ₁ or ℱ₂ and its derivative at small ρ from the first two series terms."""
    x = rho**6 / 6**4
    parts: list[float] = []
    for term in basis_parameters(m, which):
        b1, b2, b3 = (float(b) for b in term.params)
        c = float(term.prefactor) * scale
        second = x / (b1 * b2 * b3)
        value = c * rho**term.power * (1.0 + second)
        slope = c * (term.power * rho ** (term.power - 1) + (term.power + 6) * rho ** (term.power - 1) * second)
        parts.extend((value, slope))
    return OdeState(*parts)


@dataclass(slots=True)
class Trajectory:
    """Integrated (ρ, state) nodes with cubic Hermite dense output."""

    m: AzimuthalNumber
    which: Basis
    rho: np.ndarray
    states: np.ndarray
    nfev: int = 0
    _splines: tuple[CubicHermiteSpline, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        c1, c2 = _centrifugal(self.m)
        phi1, dphi1, phi2, dphi2 = self.states
        d2phi1, d2phi2 = _second_derivatives(c1, c2, self.rho, phi1, dphi1, phi2, dphi2)
        self._splines = (
            CubicHermiteSpline(self.rho, phi1, dphi1),
            CubicHermiteSpline(self.rho, dphi1, d2phi1),
            CubicHermiteSpline(self.rho, phi2, dphi2),
            CubicHermiteSpline(self.rho, dphi2, d2phi2),
        )

    def __len__(self) -> int:
        return int(self.rho.shape[0])

    def __iter__(self) -> Iterator[tuple[float, OdeState]]:
        for i in range(len(self)):
            yield float(self.rho[i]), OdeState(*(float(v) for v in self.states[:, i]))

    def _check(self, rho: Any) -> np.ndarray:
        points = np.asarray(rho, dtype=float)
        if np.any(points < self.rho[0]) or np.any(points > self.rho[-1]):
            raise DomainError(f"rho outside the trajectory [{self.rho[0]:g}, {self.rho[-1]:g}]")
        return points

    def at(self, rho: float) -> OdeState:
        point = self._check(rho)
        return OdeState(*(float(spline(point)) for spline in self._splines))

    def spinor(self, rho: float) -> Spinor2:
        return self.at(rho).spinor()

    def values(self, rhos: Sequence[float] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        points = self._check(rhos)
        return self._splines[0](points), self._splines[2](points)


def propagate(
    m: AzimuthalNumber,
    which: Basis | str,
    rho_end: float,
    cfg: IntegratorConfig | None = None,
    *,
    seed_scale: float = 1.0,
) -> Trajectory:
    """Integrate ℱ₁ or ℱ₂ from its series seed at ``cfg.seed_rho`` out to ``rho_end``."""
    cfg = cfg or IntegratorConfig()
    which = Basis(which)
    if not rho_end > cfg.seed_rho:
        raise DomainError(f"rho_end={rho_end} must exceed seed_rho={cfg.seed_rho}")
    if rho_end > MAX_PROPAGATION_RHO:
        raise DomainError(
            f"rho_end={rho_end} is beyond {MAX_PROPAGATION_RHO:g}, where forward "
            "integration is swamped by the growing solution"
        )
    seed = seed_state(m, which, cfg.seed_rho, seed_scale)
    c1, c2 = _centrifugal(m)

    def rhs(rho: float, y: np.ndarray) -> np.ndarray:
        d2phi1, d2phi2 = _second_derivatives(c1, c2, rho, y[0], y[1], y[2], y[3])
        return np.array([y[1], d2phi1, y[3], d2phi2])

    solution = solve_ivp(
        rhs,
        (cfg.seed_rho, float(rho_end)),
        np.array(seed.as_tuple()),
        method=cfg.method,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
    )
    if not solution.success:
        raise StiffnessError(f"integration of {which.value}(m={m}) failed: {solution.message}")
    logger.debug("propagated %s(m=%s) to rho=%g in %d steps", which.value, m, rho_end, solution.t.size)
    return Trajectory(m=m, which=which, rho=solution.t, states=solution.y, nfev=int(solution.nfev))


def _derivatives(values: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Centre value, first and second derivative from a 5-point stencil (columns -2h..2h)."""
    fm2, fm1, f0, fp1, fp2 = values.T
    first = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    second = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    return f0, first, second


def residual(
    m: AzimuthalNumber,
    sampler: Callable[[float], Spinor2],
    rho_grid: Sequence[float],
    h: float = RESIDUAL_STEP,
) -> float:
    """Largest relative defect of ``sampler`` in the radial system over ``rho_grid``.

    Each equation's defect is divided by the sum of the magnitudes of its
    terms, so a true solution gives a value near the finite-difference
    error and a non-solution gives O(1).
    """
    grid = np.asarray(rho_grid, dtype=float)
    if grid.size == 0:
        raise DomainError("residual needs a non-empty rho grid")
    if not h > 0 or np.any(grid - 2.0 * h <= 0):
        raise DomainError(f"the 5-point stencil needs rho > 2h (h={h:g})")
    offsets = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * h
    phi1 = np.empty((grid.size, 5))
    phi2 = np.empty((grid.size, 5))
    for i, rho in enumerate(grid):
        for j, offset in enumerate(offsets):
            sample = sampler(float(rho + offset))
            phi1[i, j], phi2[i, j] = sample.phi1, sample.phi2

    c1, c2 = _centrifugal(m)
    f1, d1, dd1 = _derivatives(phi1, h)
    f2, d2, dd2 = _derivatives(phi2, h)
    terms1 = (dd1, d1 / grid, -c1 / grid**2 * f1, -grid * f2)
    terms2 = (dd2, d2 / grid, -c2 / grid**2 * f2, -grid * f1)
    worst = 0.0
    for terms in (terms1, terms2):
        defect = np.abs(sum(terms))
        scale = sum(np.abs(t) for t in terms) + RESIDUAL_FLOOR
        worst = max(worst, float(np.max(defect / scale)))
    return worst
