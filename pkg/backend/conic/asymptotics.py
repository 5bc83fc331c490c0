"""Origin and far-field forms of the radial system, and their least-squares extraction.

Far from the crossing every solution is a combination of three channels,

    ρ^{-3/4} e^{+z} (1, 1),   ρ^{-3/4} e^{-z} (1, 1),   ρ^{-3/4} e^{±iz} (1, -1),

with z = ⅔ρ^{3/2}. Each channel carries a formal series in ρ^{-3/2} whose
coefficients follow from a two-term recursion; the series are divergent and
are summed up to (not including) their smallest term.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, NamedTuple, Sequence

import numpy as np

from .constants import MAX_ASYMPTOTIC_TERMS, MAX_CONDITION
from .domain import AzimuthalNumber, Spinor2
from .errors import DomainError, FitError

logger = logging.getLogger(__name__)

MIN_FIT_SAMPLES = 8
MIN_SAMPLES_PER_PERIOD = 6
WEIGHT_FLOOR = 1e-13


class Channel(str, Enum):
    OSCILLATORY = "oscillatory"
    GROWING = "growing"
    DECAYING = "decaying"


@dataclass(frozen=True, slots=True)
class OriginCoeffs:
    """Coefficients of the four power laws allowed at ρ → 0."""

    a_plus: float
    a_minus: float
    b_plus: float
    b_minus: float

    def as_dict(self) -> dict[str, Any]:
        return {
            "aPlus": self.a_plus,
            "aMinus": self.a_minus,
            "bPlus": self.b_plus,
            "bMinus": self.b_minus,
        }


@dataclass(frozen=True, slots=True)
class FarField:
    """Amplitudes (A₊, A₋, C, φ) of the large-ρ form plus fit diagnostics."""

    a_plus_inf: float
    a_minus_inf: float
    amplitude_c: float
    phase_phi: float
    fit_residual: float = 0.0
    condition_number: float = 1.0
    corrected: bool = False

    def __post_init__(self) -> None:
        if self.amplitude_c < 0:
            raise DomainError(f"far-field amplitude must be >= 0, got {self.amplitude_c}")
        if not -math.pi < self.phase_phi <= math.pi:
            raise DomainError(f"far-field phase must lie in (-pi, pi], got {self.phase_phi}")

    def as_dict(self) -> dict[str, Any]:
        return {
            "aPlusInf": self.a_plus_inf,
            "aMinusInf": self.a_minus_inf,
            "amplitudeC": self.amplitude_c,
            "phasePhi": self.phase_phi,
            "fitResidual": self.fit_residual,
            "conditionNumber": self.condition_number,
            "corrected": self.corrected,
        }


class SeriesSum(NamedTuple):
    """Optimally truncated channel series.

    ``sym`` multiplies (1, 1) and ``anti`` multiplies (1, -1); neither
    includes the ρ^{-3/4} e^{λz} prefactor. ``error`` is the smallest term,
    the first one left out.
    """

    sym: np.ndarray
    anti: np.ndarray
    error: np.ndarray


def z_of(rho: Any) -> Any:
    """Phase variable z = ⅔ρ^{3/2}."""
    return (2.0 / 3.0) * np.power(rho, 1.5)


def rho_of(z: Any) -> Any:
    """Inverse of :func:`z_of`."""
    return np.power(1.5 * np.asarray(z, dtype=float), 2.0 / 3.0)


def connection_phase(m: AzimuthalNumber) -> float:
    """Phase -π(|m|/3 + 1/4) carried by the bounded solution at infinity."""
    return -math.pi * (abs(m).value / 3.0 + 0.25)


def _wrap_phase(phi: float) -> float:
    wrapped = math.remainder(phi, 2.0 * math.pi)
    return math.pi if wrapped <= -math.pi else wrapped


def phase_difference(a: float, b: float) -> float:
    """|a - b| measured on the circle, in [0, π]."""
    return abs(math.remainder(a - b, 2.0 * math.pi))


@lru_cache(maxsize=64)
def _coefficients(numerator: int, channel: Channel) -> tuple[np.ndarray, np.ndarray]:
    """(p_k, q_k) for k = 0..MAX_ASYMPTOTIC_TERMS, for m = numerator/2 > 0."""
    m = numerator / 2.0
    size = MAX_ASYMPTOTIC_TERMS + 2
    p = np.zeros(size, dtype=complex)
    q = np.zeros(size, dtype=complex)

    def beta(j: int) -> float:
        return (0.75 + 1.5 * j) ** 2 - m * m - 0.25

    if channel is Channel.OSCILLATORY:
        lam = 1j
        p[0] = 1.0
        for k in range(1, size - 1):
            p[k] = (beta(k - 1) * p[k - 1] + m * q[k - 1]) / (3.0 * lam * k)
            q[k + 1] = (beta(k - 1) * q[k - 1] + m * p[k - 1] - 3.0 * lam * k * q[k]) / 2.0
    else:
        lam = 1.0 if channel is Channel.GROWING else -1.0
        q[0] = 1.0
        for k in range(1, size - 1):
            q[k] = (beta(k - 1) * q[k - 1] + m * p[k - 1]) / (3.0 * lam * k)
            p[k + 1] = (3.0 * lam * k * p[k] - beta(k - 1) * p[k - 1] - m * q[k - 1]) / 2.0

    p = p[: MAX_ASYMPTOTIC_TERMS + 1]
    q = q[: MAX_ASYMPTOTIC_TERMS + 1]
    if channel is not Channel.OSCILLATORY:
        p, q = p.real.copy(), q.real.copy()
    p.flags.writeable = False
    q.flags.writeable = False
    return p, q


def channel_coefficients(m: AzimuthalNumber, channel: Channel | str) -> tuple[np.ndarray, np.ndarray]:
    """(p_k, q_k): coefficients of ρ^{-3k/2} in the ``anti`` and ``sym`` series of ``channel`` at |m|."""
    return _coefficients(abs(m).numerator, Channel(channel))


def asymptotic_series(m: AzimuthalNumber, channel: Channel | str, rho: Any) -> SeriesSum:
    """Sum the large-ρ series of ``channel`` at each ``rho``, stopping before the smallest term.

    Negative m follows from |m| by swapping components, which flips ``anti``.
    """
    channel = Channel(channel)
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0)):
        raise DomainError("asymptotic series need rho > 0")
    p, q = _coefficients(abs(m).numerator, channel)
    k = np.arange(p.shape[0])
    flat = rho.reshape(-1, 1)
    with np.errstate(over="ignore", invalid="ignore"):
        powers = np.power(flat**-1.5, k)
        terms_p = p * powers
        terms_q = q * powers
        size = np.abs(terms_p) + np.abs(terms_q)
    size = np.where(np.isfinite(size), size, np.inf)
    cut = np.argmin(size, axis=1)
    keep = k < cut[:, None]
    anti = np.where(keep, terms_p, 0.0).sum(axis=1).reshape(rho.shape)
    sym = np.where(keep, terms_q, 0.0).sum(axis=1).reshape(rho.shape)
    error = np.take_along_axis(size, cut[:, None], axis=1)[:, 0].reshape(rho.shape)
    if not m.is_positive:
        anti = -anti
    return SeriesSum(sym=sym, anti=anti, error=error)


def _channel_parts(
    m: AzimuthalNumber, channel: Channel, rho: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(sym, anti) of ρ^{3/4}·channel solution, with e^{λz} applied, and its truncation error."""
    series = asymptotic_series(m, channel, rho)
    z = z_of(rho)
    if channel is Channel.OSCILLATORY:
        factor = np.exp(1j * z)
    elif channel is Channel.GROWING:
        factor = np.exp(z)
    else:
        factor = np.exp(-z)
    return series.sym * factor, series.anti * factor, series.error * np.abs(factor)


def leading_asymptote_values(m: AzimuthalNumber, rho: Any) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ρ^{-3/4} cos(z - π(|m|/3 + 1/4)) (1, -1), swapped for m < 0."""
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0)):
        raise DomainError("leading asymptote needs rho > 0")
    value = np.power(rho, -0.75) * np.cos(z_of(rho) + connection_phase(m))
    if m.is_positive:
        return value, -value
    return -value, value


def leading_asymptote(m: AzimuthalNumber, rho: float) -> Spinor2:
    phi1, phi2 = leading_asymptote_values(m, rho)
    return Spinor2(float(phi1), float(phi2))


def far_field_values(
    ff: FarField, m: AzimuthalNumber, rho: Any, *, corrected: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized evaluation of the far-field form with amplitudes ``ff``.

    With ``corrected`` each channel carries its truncated ρ^{-3/2} series;
    otherwise only the leading terms are kept.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0)):
        raise DomainError("far-field form needs rho > 0")
    m_abs = abs(m)
    z = z_of(rho)
    if corrected:
        sym_m, anti_m, _ = _channel_parts(m_abs, Channel.DECAYING, rho)
        sym_o, anti_o, _ = _channel_parts(m_abs, Channel.OSCILLATORY, rho)
        rotation = ff.amplitude_c * complex(math.cos(ff.phase_phi), math.sin(ff.phase_phi))
        sym = ff.a_minus_inf * sym_m.real + (rotation * sym_o).real
        anti = ff.a_minus_inf * anti_m.real + (rotation * anti_o).real
        if ff.a_plus_inf != 0.0:
            sym_p, anti_p, _ = _channel_parts(m_abs, Channel.GROWING, rho)
            sym = sym + ff.a_plus_inf * sym_p.real
            anti = anti + ff.a_plus_inf * anti_p.real
    else:
        sym = ff.a_minus_inf * np.exp(-z)
        if ff.a_plus_inf != 0.0:
            sym = sym + ff.a_plus_inf * np.exp(z)
        anti = ff.amplitude_c * np.cos(z + ff.phase_phi)
    scale = np.power(rho, -0.75)
    phi1 = scale * (sym + anti)
    phi2 = scale * (sym - anti)
    if m.is_positive:
        return phi1, phi2
    return phi2, phi1


def far_field_eval(
    ff: FarField, m: AzimuthalNumber, rho: float, *, corrected: bool = False
) -> Spinor2:
    phi1, phi2 = far_field_values(ff, m, rho, corrected=corrected)
    return Spinor2(float(phi1), float(phi2))


def extract_far_field(
    samples: Sequence[tuple[float, Spinor2]],
    m: AzimuthalNumber,
    *,
    corrected: bool = True,
    bounded: bool = False,
    weights: Sequence[float] | None = None,
    correction_column: bool = False,
) -> FarField:
    """Fit (A₊, A₋, C, φ) to samples of a solution by linear least squares.

    The symmetric and antisymmetric combinations of ρ^{3/4}(φ₁, φ₂) are fitted
    jointly. ``bounded`` drops the e^{+z} column; ``correction_column`` adds a
    ρ^{-3/2}(cos z, sin z) pair to the uncorrected model. Corrected fits weight
    each sample by the inverse truncation error of the oscillatory series
    unless ``weights`` is given.
    """
    if len(samples) < MIN_FIT_SAMPLES:
        raise DomainError(f"far-field fit needs at least {MIN_FIT_SAMPLES} samples, got {len(samples)}")
    ordered = sorted(samples, key=lambda item: item[0])
    rho = np.array([r for r, _ in ordered], dtype=float)
    if np.any(~(rho > 0)):
        raise DomainError("far-field fit needs rho > 0")
    values = np.array([s.as_tuple() if m.is_positive else s.swap().as_tuple() for _, s in ordered])
    z = z_of(rho)
    max_gap = float(np.max(np.diff(z))) if len(z) > 1 else math.inf
    if max_gap > 2.0 * math.pi / MIN_SAMPLES_PER_PERIOD:
        raise DomainError(
            f"samples too sparse: largest z-gap {max_gap:.3g} exceeds "
            f"{MIN_SAMPLES_PER_PERIOD} samples per period"
        )

    m_abs = abs(m)
    scale = np.power(rho, 0.75)
    sym_data = scale * (values[:, 0] + values[:, 1]) / 2.0
    anti_data = scale * (values[:, 0] - values[:, 1]) / 2.0
    zeros = np.zeros_like(rho)

    columns: list[tuple[str, np.ndarray, np.ndarray]] = []
    if corrected:
        sym_o, anti_o, osc_error = _channel_parts(m_abs, Channel.OSCILLATORY, rho)
        if not bounded:
            sym_p, anti_p, _ = _channel_parts(m_abs, Channel.GROWING, rho)
            columns.append(("plus", sym_p.real, anti_p.real))
        sym_m, anti_m, _ = _channel_parts(m_abs, Channel.DECAYING, rho)
        columns.append(("minus", sym_m.real, anti_m.real))
        columns.append(("cos", sym_o.real, anti_o.real))
        columns.append(("sin", sym_o.imag, anti_o.imag))
        default_weights = 1.0 / (osc_error + WEIGHT_FLOOR)
    else:
        if not bounded:
            columns.append(("plus", np.exp(z), zeros))
        columns.append(("minus", np.exp(-z), zeros))
        columns.append(("cos", zeros, np.cos(z)))
        columns.append(("sin", zeros, np.sin(z)))
        if correction_column:
            x = np.power(rho, -1.5)
            columns.append(("cos1", zeros, x * np.cos(z)))
            columns.append(("sin1", zeros, x * np.sin(z)))
        default_weights = np.ones_like(rho)

    if weights is None:
        row_weights = default_weights
    else:
        row_weights = np.asarray(weights, dtype=float)
        if row_weights.shape != rho.shape or np.any(~(row_weights > 0)):
            raise DomainError("weights must be positive, one per sample")

    names = [name for name, _, _ in columns]
    design = np.column_stack([np.concatenate([s, a]) for _, s, a in columns])
    target = np.concatenate([sym_data, anti_data])
    w = np.concatenate([row_weights, row_weights])

    weighted = design * w[:, None]
    norms = np.linalg.norm(weighted, axis=0)
    if np.any(norms == 0):
        raise FitError("far-field design has an all-zero column")
    equilibrated = weighted / norms
    condition = float(np.linalg.cond(equilibrated))
    if not condition <= MAX_CONDITION:
        raise FitError(f"far-field fit is ill-conditioned (condition number {condition:.3g})")
    solution, *_ = np.linalg.lstsq(equilibrated, target * w, rcond=None)
    coef = dict(zip(names, solution / norms))
    residual = float(np.max(np.abs(design @ (solution / norms) - target)))

    alpha, beta = coef["cos"], coef["sin"]
    amplitude = math.hypot(alpha, beta)
    phase = _wrap_phase(math.atan2(-beta, alpha))
    logger.debug(
        "far-field fit m=%s: C=%.12g phi=%.12g residual=%.3g cond=%.3g",
        m, amplitude, phase, residual, condition,
    )
    return FarField(
        a_plus_inf=float(coef.get("plus", 0.0)),
        a_minus_inf=float(coef["minus"]),
        amplitude_c=amplitude,
        phase_phi=phase,
        fit_residual=residual,
        condition_number=condition,
        corrected=corrected,
    )


def _origin_term(coef: float, rho: float, exponent: Any) -> float:
    if coef == 0.0:
        return 0.0
    if rho == 0.0:
        if exponent < 0:
            raise DomainError(f"origin form is singular at rho=0 (exponent {exponent})")
        return coef if exponent == 0 else 0.0
    return coef * rho ** float(exponent)


def origin_form(oc: OriginCoeffs, m: AzimuthalNumber, rho: float) -> Spinor2:
    """(a₊ρ^{m-1/2} + a₋ρ^{-m+1/2}, b₊ρ^{m+1/2} + b₋ρ^{-m-1/2})."""
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    mf = m.fraction
    phi1 = _origin_term(oc.a_plus, rho, mf - 0.5) + _origin_term(oc.a_minus, rho, -mf + 0.5)
    phi2 = _origin_term(oc.b_plus, rho, mf + 0.5) + _origin_term(oc.b_minus, rho, -mf - 0.5)
    return Spinor2(phi1, phi2)


def _power_fit(
    rho: np.ndarray, data: np.ndarray, plus: float, minus: float, regular_plus: bool
) -> tuple[float, float]:
    if plus == minus:
        (coef,) = _least_squares(rho, data, [plus])
        return (coef, 0.0) if regular_plus else (0.0, coef)
    coef_plus, coef_minus = _least_squares(rho, data, [plus, minus])
    return coef_plus, coef_minus


def _least_squares(rho: np.ndarray, data: np.ndarray, exponents: list[float]) -> list[float]:
    design = np.column_stack([np.power(rho, e) for e in exponents])
    norms = np.linalg.norm(design, axis=0)
    equilibrated = design / norms
    condition = float(np.linalg.cond(equilibrated))
    if not condition <= MAX_CONDITION:
        raise FitError(f"origin fit is ill-conditioned (condition number {condition:.3g})")
    solution, *_ = np.linalg.lstsq(equilibrated, data, rcond=None)
    return list(solution / norms)


def extract_origin_coeffs(
    samples: Sequence[tuple[float, Spinor2]], m: AzimuthalNumber
) -> OriginCoeffs:
    """Least-squares fit of the origin power laws to samples taken near ρ = 0.

    At |m| = 1/2 two of the exponents coincide; the second (logarithmic)
    solution is never built, so the whole coefficient is credited to the
    regular power law and its partner is reported as 0.
    """
    if len(samples) < 4:
        raise DomainError(f"origin fit needs at least 4 samples, got {len(samples)}")
    rho = np.array([r for r, _ in samples], dtype=float)
    if np.any(~(rho > 0)):
        raise DomainError("origin fit needs rho > 0")
    phi1 = np.array([s.phi1 for _, s in samples])
    phi2 = np.array([s.phi2 for _, s in samples])
    mv = m.value
    a_plus, a_minus = _power_fit(rho, phi1, mv - 0.5, -mv + 0.5, m.is_positive)
    b_plus, b_minus = _power_fit(rho, phi2, mv + 0.5, -mv - 0.5, m.is_positive)
    return OriginCoeffs(float(a_plus), float(a_minus), float(b_plus), float(b_minus))
