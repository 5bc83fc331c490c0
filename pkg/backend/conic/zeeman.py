"""Zeeman quantities built on ℱ_c: g(m), T_e, ΔE(m), and the WKB matching check.

    g(m)  = ∫₀^∞ ρ (φ₁² - φ₂²) dρ
    T_e   = ∫ dr / √(-E₁(r)) between the turning points of E₁
    ΔE(m) = M^{-1/6} g(m) B / T_e
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import integrate

from .asymptotics import Channel, channel_coefficients, connection_phase, far_field_values, rho_of, z_of
from .config import Settings, get_settings
from .conic_core import conic_fc, conic_fc_grid, conic_params
from .constants import (
    DEFAULT_G_TOL,
    G_TOL_RANGE,
    MATCHING_MARGIN,
    MATCHING_R_MAX,
    TAIL_SAFETY,
)
from .domain import AzimuthalNumber
from .errors import DomainError, PrecisionError
from .potential import PotentialCurve

logger = logging.getLogger(__name__)

PANEL_CHUNK = 256
MAX_PANEL_SPLIT = 8
QUAD_LIMIT = 200
TAIL_STEP = 0.5
TAIL_START = 2.0
MATCHING_SAMPLES = 64
DEFAULT_TE_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class GResult:
    """g(m) with its error budget; value ± (quadrature_error + tail_bound) brackets g."""

    m: AzimuthalNumber
    value: float
    quadrature_error: float
    tail_bound: float
    rho_max: float

    def __post_init__(self) -> None:
        if self.quadrature_error < 0 or self.tail_bound < 0:
            raise DomainError("error estimates must be non-negative")

    def as_dict(self) -> dict[str, Any]:
        return {
            "m": str(self.m),
            "value": self.value,
            "error": self.quadrature_error,
            "tailBound": self.tail_bound,
            "rhoMax": self.rho_max,
        }


@lru_cache(maxsize=4)
def _legendre(points: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(points)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def tail_estimate(m: AzimuthalNumber, amplitude_c: float, phase_phi: float, rho: float) -> float:
    """Leading part of ∫_ρ^∞ ρ'(φ₁² - φ₂²) dρ' for the bounded far field.

    The integrand starts as 2|m|C² cos²(z + φ) ρ^{-7/2}. Its mean integrates to
    0.4|m|C² ρ^{-5/2} and the cos 2(z + φ) part, by parts in z, to
    -½|m|C² sin 2(z + φ) ρ^{-4}.
    """
    weight = abs(m).value * amplitude_c**2
    theta = 2.0 * (float(z_of(rho)) + phase_phi)
    return weight * (0.4 * rho**-2.5 - 0.5 * math.sin(theta) * rho**-4.0)


@lru_cache(maxsize=64)
def _remainder_weight(numerator: int) -> float:
    p, q = (np.abs(c) for c in channel_coefficients(AzimuthalNumber(numerator), Channel.OSCILLATORY))
    parts = 2.0 * q[2]
    zero_mean = 2.0 * (q[2] * p[1] + q[3] * p[0])
    next_mean = (8.0 / 11.0) * (q[2] * p[2] + q[3] * p[1] + q[4] * p[0])
    return float(parts + zero_mean + next_mean)


def tail_bound(m: AzimuthalNumber, amplitude_c: float, a_minus: float, rho: float) -> float:
    """Bound on what :func:`tail_estimate` leaves out; every piece falls off like ρ^{-11/2} or e^{-z}."""
    algebraic = TAIL_SAFETY * _remainder_weight(abs(m).numerator) * amplitude_c**2 * rho**-5.5
    decaying = 4.0 * abs(a_minus) * amplitude_c * math.exp(-z_of(rho)) / math.sqrt(rho)
    return algebraic + decaying


def _panel_rules(edges: np.ndarray, integrand: Any) -> tuple[np.ndarray, np.ndarray]:
    """16- and 8-point Gauss-Legendre values of ``integrand`` on each z-panel."""
    high: list[np.ndarray] = []
    low: list[np.ndarray] = []
    for start in range(0, edges.size - 1, PANEL_CHUNK):
        a = edges[start : start + PANEL_CHUNK]
        b = edges[start + 1 : start + PANEL_CHUNK + 1]
        a = a[: b.size]
        mid, half = (a + b) / 2.0, (b - a) / 2.0
        for points, out in ((16, high), (8, low)):
            nodes, weights = _legendre(points)
            z = mid[:, None] + half[:, None] * nodes
            values = integrand(z.ravel()).reshape(z.shape)
            out.append(half * (values @ weights))
    return np.concatenate(high), np.concatenate(low)


def _oscillatory_part(
    m: AzimuthalNumber, params: Any, rho_switch: float, rho_max: float, budget: float
) -> tuple[float, float]:
    ff = params.far_field

    def integrand(z: np.ndarray) -> np.ndarray:
        rho = rho_of(z)
        phi1, phi2 = far_field_values(ff, m, rho, corrected=True)
        # ρ dρ = ρ^{1/2} dz
        return np.sqrt(rho) * (phi1**2 - phi2**2)

    z0, z1 = float(z_of(rho_switch)), float(z_of(rho_max))
    base = np.append(np.arange(z0, z1, math.pi), z1)
    if base[-1] - base[-2] < 1e-9:
        base = np.delete(base, -2)
    split = 1
    while True:
        edges = np.concatenate(
            [np.linspace(base[i], base[i + 1], split + 1)[:-1] for i in range(base.size - 1)] + [[z1]]
        )
        high, low = _panel_rules(edges, integrand)
        error = math.fsum(np.abs(high - low))
        if error <= budget or split >= MAX_PANEL_SPLIT:
            break
        split *= 2
    if error > budget:
        logger.warning("g(m=%s) panel error %.3g exceeds its budget %.3g", m, error, budget)
    return math.fsum(high), error


def g_factor(
    m: AzimuthalNumber,
    tol: float = DEFAULT_G_TOL,
    *,
    settings: Settings | None = None,
) -> GResult:
    """g(m) = ∫₀^∞ ρ(φ₁² - φ₂²) dρ.

    Adaptive quadrature up to rho_switch, period-aligned Gauss-Legendre panels
    up to rho_max, and the leading tail past rho_max in closed form; only the
    remainder of that tail counts against ``tol``. Negative m is the exact
    negation of |m|.
    """
    lo, hi = G_TOL_RANGE
    if not lo <= tol <= hi:
        raise DomainError(f"g tolerance must lie in [{lo:g}, {hi:g}], got {tol:g}")
    settings = settings or get_settings()
    m_abs = abs(m)
    params = conic_params(m_abs, settings=settings)
    rs = params.rho_switch
    ff = params.far_field

    rho_max = rs + TAIL_START
    bound = tail_bound(m_abs, ff.amplitude_c, ff.a_minus_inf, rho_max)
    while bound >= tol / 2.0:
        rho_max += TAIL_STEP
        if rho_max > settings.rho_cap:
            raise PrecisionError(
                f"g(m={m_abs}) tail bound stays above {tol / 2:g} up to rho_cap={settings.rho_cap:g}; "
                "raise the tolerance or CONIC_RHO_CAP"
            )
        bound = tail_bound(m_abs, ff.amplitude_c, ff.a_minus_inf, rho_max)

    def inner(rho: float) -> float:
        value = conic_fc(m_abs, rho, settings=settings)
        return rho * (value.phi1**2 - value.phi2**2)

    near, near_error = integrate.quad(inner, 0.0, rs, epsabs=tol / 4.0, epsrel=0.0, limit=QUAD_LIMIT)
    far, far_error = _oscillatory_part(m_abs, params, rs, rho_max, tol / 4.0)
    tail = tail_estimate(m_abs, ff.amplitude_c, ff.phase_phi, rho_max)
    value = math.fsum([near, far, tail])
    logger.info(
        "g(m=%s)=%.12g near=%.12g far=%.12g tail=%.3g rho_max=%g bound=%.3g",
        m_abs, value, near, far, tail, rho_max, bound,
    )
    sign = 1.0 if m.is_positive else -1.0
    return GResult(
        m=m,
        value=sign * value,
        quadrature_error=float(near_error + far_error),
        tail_bound=bound,
        rho_max=rho_max,
    )


def _period_piece(curve: PotentialCurve, a: float, b: float, tol: float) -> tuple[float, float]:
    """∫_a^b dr/√(-E₁) with u² substitution at whichever end is a turning point."""
    left, right = curve.turning_points

    def inverse_speed(r: Any) -> Any:
        return 1.0 / np.sqrt(np.maximum(-np.asarray(curve.energy(r), dtype=float), 1e-300))

    def from_left(u: float) -> float:
        return float(2.0 * u * inverse_speed(a + u * u))

    def from_right(u: float) -> float:
        return float(2.0 * u * inverse_speed(b - u * u))

    def plain(r: float) -> float:
        return float(inverse_speed(r))

    kinks = [k for k in curve.breakpoints if a < k < b]
    if a == left:
        fn, lower, upper = from_left, 0.0, math.sqrt(b - a)
        points = [math.sqrt(k - a) for k in kinks]
    elif b == right:
        fn, lower, upper = from_right, 0.0, math.sqrt(b - a)
        points = [math.sqrt(b - k) for k in kinks]
    else:
        fn, lower, upper = plain, a, b
        points = kinks
    return integrate.quad(
        fn,
        lower,
        upper,
        epsabs=0.0,
        epsrel=tol,
        limit=QUAD_LIMIT,
        points=sorted(points) or None,
    )


def electronic_period(
    curve: PotentialCurve, tol: float = DEFAULT_TE_TOL, split_at: float | None = None
) -> float:
    """T_e = ∫ dr/√(-E₁(r)) between the two turning points.

    The interval is cut at ``split_at`` (midpoint by default) so each end
    singularity gets its own u² = |r - r_turn| substitution.
    """
    if not 0 < tol < 1:
        raise DomainError(f"tolerance must lie in (0, 1), got {tol}")
    left, right = curve.turning_points
    cut = (left + right) / 2.0 if split_at is None else float(split_at)
    if not left < cut < right:
        raise DomainError(f"split point {cut} must lie strictly between the turning points")
    first, err1 = _period_piece(curve, left, cut, tol)
    second, err2 = _period_piece(curve, cut, right, tol)
    total = first + second
    if err1 + err2 > tol * total:
        raise PrecisionError(f"T_e quadrature error {err1 + err2:.3g} exceeds the requested tolerance")
    logger.debug("T_e(%s) = %.12g", curve.label, total)
    return total


class ZeemanParams(BaseModel):
    """Mass ratio M, gap parameter B (atomic units) and electronic period T_e."""

    model_config = ConfigDict(frozen=True)

    mass_ratio: float = Field(gt=0)
    field_b: float = Field(ge=0)
    t_e: float = Field(gt=0)

    @property
    def epsilon(self) -> float:
        """ε = M^{-1/3}, the length scale of the crossing region."""
        return self.mass_ratio ** (-1.0 / 3.0)


def zeeman_splitting(m: AzimuthalNumber, p: ZeemanParams, g: float | None = None) -> float:
    """ΔE(m) = M^{-1/6} g(m) B / T_e; g(m) is computed when not supplied."""
    if g is None:
        g = g_factor(m).value
    return p.mass_ratio ** (-1.0 / 6.0) * g * p.field_b / p.t_e


@dataclass(frozen=True, slots=True)
class LevelPair:
    """Shifts of the +m and -m levels; they move apart by ``splitting``."""

    m: AzimuthalNumber
    upper: float
    lower: float
    splitting: float

    def as_dict(self) -> dict[str, Any]:
        return {"m": str(self.m), "upper": self.upper, "lower": self.lower, "splitting": self.splitting}


def level_pair(m: AzimuthalNumber, p: ZeemanParams, g: float | None = None) -> LevelPair:
    delta = zeeman_splitting(m, p, g)
    return LevelPair(m=m, upper=delta / 2.0, lower=-delta / 2.0, splitting=delta)


def wkb_radial(r: Any, M: float, N: float, phase: float) -> Any:
    """(N / r^{3/4}) cos(√M ⅔ r^{3/2} + phase)."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0)):
        raise DomainError("WKB radial form needs r > 0")
    value = N * np.power(r_arr, -0.75) * np.cos(math.sqrt(M) * (2.0 / 3.0) * np.power(r_arr, 1.5) + phase)
    return float(value) if value.ndim == 0 else value


@dataclass(frozen=True, slots=True)
class MatchingReport:
    """Shape comparison of M^{1/4} ℱ_c(m; M^{1/3} r) against the WKB form over a window."""

    m: AzimuthalNumber
    mass_ratio: float
    r_window: tuple[float, float]
    envelope_deviation: float
    phase_deviation: float
    shape_deviation: float
    samples: int

    def as_dict(self) -> dict[str, Any]:
        return {
            "m": str(self.m),
            "M": self.mass_ratio,
            "rWindow": list(self.r_window),
            "envelopeDeviation": self.envelope_deviation,
            "phaseDeviation": self.phase_deviation,
            "shapeDeviation": self.shape_deviation,
            "samples": self.samples,
        }

    def __iter__(self) -> Iterator[float]:
        yield from (self.envelope_deviation, self.phase_deviation, self.shape_deviation)


def matching_check(
    m: AzimuthalNumber,
    M: float,
    r_window: tuple[float, float],
    *,
    samples: int = MATCHING_SAMPLES,
    settings: Settings | None = None,
) -> MatchingReport:
    """Compare ℱ_c rescaled to physical r with the WKB approximant (N = 1, phase from the connection formula).

    Envelope and phase of ψ = ρ^{3/4}φ₁ are read from ψ and dψ/dz. The window
    must satisfy 2·M^{-1/3} ≤ r_lo < r_hi ≤ 0.1.
    """
    if not M > 0:
        raise DomainError(f"M must be positive, got {M}")
    r_lo, r_hi = (float(v) for v in r_window)
    floor = MATCHING_MARGIN * M ** (-1.0 / 3.0)
    if not (floor * (1.0 - 1e-12) <= r_lo < r_hi <= MATCHING_R_MAX):
        raise DomainError(
            f"matching window [{r_lo:g}, {r_hi:g}] must satisfy "
            f"{floor:.3g} <= r_lo < r_hi <= {MATCHING_R_MAX:g} for M={M:g}"
        )
    if samples < 2:
        raise DomainError("matching check needs at least 2 samples")

    r = np.linspace(r_lo, r_hi, samples)
    scale = M ** (1.0 / 3.0)
    rho = scale * r
    h = 1e-3 / np.sqrt(rho)
    grid = np.concatenate([rho, rho - h, rho + h])
    phi1, _ = conic_fc_grid(m, grid, settings=settings)
    phi1_mid, phi1_lo, phi1_hi = np.split(phi1, 3)

    def psi(x: np.ndarray, values: np.ndarray) -> np.ndarray:
        return np.power(x, 0.75) * values

    sign = 1.0 if m.is_positive else -1.0
    psi_mid = sign * psi(rho, phi1_mid)
    dpsi_dz = sign * (psi(rho + h, phi1_hi) - psi(rho - h, phi1_lo)) / (2.0 * h) / np.sqrt(rho)
    envelope = np.hypot(psi_mid, dpsi_dz)
    phase = np.arctan2(-dpsi_dz, psi_mid) - z_of(rho)
    expected = connection_phase(m)
    phase_error = np.abs(np.angle(np.exp(1j * (phase - expected))))

    physical = sign * M**0.25 * phi1_mid
    wkb = wkb_radial(r, M, 1.0, expected)
    shape = np.abs(physical - wkb) * np.power(r, 0.75)

    report = MatchingReport(
        m=m,
        mass_ratio=float(M),
        r_window=(r_lo, r_hi),
        envelope_deviation=float(np.max(np.abs(envelope - 1.0))),
        phase_deviation=float(np.max(phase_error)),
        shape_deviation=float(np.max(shape)),
        samples=samples,
    )
    logger.debug("matching m=%s M=%g: %s", m, M, report.as_dict())
    return report
