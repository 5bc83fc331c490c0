"""The regular basis ℱ₁, ℱ₂, the coefficients A_j(m) and the bounded solution ℱ_c(m;ρ).

For m > 0 the two solutions regular at the origin are

    ℱ₁ = (ρ^{m-1/2} ₀F₃(;1/3, 1/2+m/3, 5/6+m/3; x),
          ρ^{m+5/2}/(6+4m) ₀F₃(;4/3, 3/2+m/3, 5/6+m/3; x))
    ℱ₂ = (ρ^{m+7/2}/(12+8m) ₀F₃(;5/3, 3/2+m/3, 7/6+m/3; x),
          ρ^{m+1/2} ₀F₃(;2/3, 1/2+m/3, 7/6+m/3; x))

with x = ρ⁶/6⁴. Both grow like e^{⅔ρ^{3/2}}; A₁ℱ₁ + A₂ℱ₂ is the combination
in which the growth cancels. Negative m is obtained from |m| by swapping the
two components.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import mpmath
import numpy as np

from .asymptotics import (
    FarField,
    extract_far_field,
    far_field_values,
    rho_of,
    z_of,
)
from .calibration_store import CalibrationKey, calibration_store
from .config import Settings, get_settings
from .constants import (
    DOUBLE_DIGITS,
    FIT_SAMPLES,
    FIT_WINDOW,
    MIN_MARGIN_DIGITS,
    OVERLAP_FAILURE,
    OVERLAP_TOLERANCE,
    OVERLAP_WINDOW,
    RHO_SWITCH_RANGE,
)
from .domain import AzimuthalNumber, Spinor2
from .errors import ConsistencyError, DomainError, PrecisionError
from .special_fn import gamma_fn, gamma_wide, hyper0f3, hyper0f3_wide, to_mpf

logger = logging.getLogger(__name__)

X_SCALE = 6**4
OVERLAP_SAMPLES = 33


class Basis(str, Enum):
    F1 = "F1"
    F2 = "F2"


@dataclass(frozen=True, slots=True)
class BasisTerm:
    """One component: prefactor · ρ^power · ₀F₃(;params; ρ⁶/6⁴)."""

    power: int
    prefactor: Fraction
    params: tuple[Fraction, Fraction, Fraction]


def _require_positive(m: AzimuthalNumber) -> Fraction:
    if not m.is_positive:
        raise DomainError(f"the regular basis is built for m > 0 only, got m={m}")
    return m.fraction


def basis_parameters(m: AzimuthalNumber, which: Basis | str) -> tuple[BasisTerm, BasisTerm]:
    """Exponents, prefactors and ₀F₃ parameters of both components of ℱ₁ or ℱ₂."""
    mf = _require_positive(m)
    third = mf / 3
    if Basis(which) is Basis.F1:
        return (
            BasisTerm(
                int(mf - Fraction(1, 2)),
                Fraction(1),
                (Fraction(1, 3), Fraction(1, 2) + third, Fraction(5, 6) + third),
            ),
            BasisTerm(
                int(mf + Fraction(5, 2)),
                1 / (6 + 4 * mf),
                (Fraction(4, 3), Fraction(3, 2) + third, Fraction(5, 6) + third),
            ),
        )
    return (
        BasisTerm(
            int(mf + Fraction(7, 2)),
            1 / (12 + 8 * mf),
            (Fraction(5, 3), Fraction(3, 2) + third, Fraction(7, 6) + third),
        ),
        BasisTerm(
            int(mf + Fraction(1, 2)),
            Fraction(1),
            (Fraction(2, 3), Fraction(1, 2) + third, Fraction(7, 6) + third),
        ),
    )


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not (math.isfinite(rho) and rho >= 0):
        raise DomainError(f"rho must be finite and >= 0, got {rho}")
    return rho


def _basis_double(m: AzimuthalNumber, which: Basis, rho: float, tol: float) -> tuple[float, float]:
    x = rho**6 / X_SCALE
    out = []
    for term in basis_parameters(m, which):
        series = hyper0f3(*term.params, x, tol)
        out.append(float(term.prefactor) * rho**term.power * series.value)
    return out[0], out[1]


def _basis_wide(m: AzimuthalNumber, which: Basis, rho: float, digits: int) -> tuple[Any, Any]:
    with mpmath.workdps(digits):
        r = mpmath.mpf(rho)
        x = r**6 / X_SCALE
        out = []
        for term in basis_parameters(m, which):
            value = hyper0f3_wide(*term.params, x, digits)
            out.append(to_mpf(term.prefactor) * r**term.power * value)
        return out[0], out[1]


def basis_f1(m: AzimuthalNumber, rho: float, tol: float | None = None) -> Spinor2:
    """ℱ₁(ρ; m), regular at the origin, leading (ρ^{m-1/2}, 0)."""
    tol = get_settings().series_tol if tol is None else tol
    return Spinor2(*_basis_double(m, Basis.F1, _check_rho(rho), tol))


def basis_f2(m: AzimuthalNumber, rho: float, tol: float | None = None) -> Spinor2:
    """ℱ₂(ρ; m), regular at the origin, leading (0, ρ^{m+1/2})."""
    tol = get_settings().series_tol if tol is None else tol
    return Spinor2(*_basis_double(m, Basis.F2, _check_rho(rho), tol))


def _check_j(j: int) -> int:
    if j not in (1, 2):
        raise DomainError(f"j must be 1 or 2, got {j}")
    return -1 if j == 1 else 1


def coeff_A(m: AzimuthalNumber, j: int) -> float:
    """A_j(m) such that A₁ℱ₁ + A₂ℱ₂ stays bounded with unit far-field amplitude.

    A_j = -s 2π^{3/2} 6^{(-s-2m)/3} / (3 Γ(1/2+m/3) Γ(1/2+s/6) Γ(1+(2m+s)/6)),
    s = (-1)^j. At m = 1/2 this gives A₁ = √(π/3).
    """
    mf = _require_positive(m)
    s = _check_j(j)
    magnitude = 2.0 * math.pi**1.5 * 6.0 ** float((-s - 2 * mf) / 3)
    denominator = (
        3.0
        * gamma_fn(Fraction(1, 2) + mf / 3)
        * gamma_fn(Fraction(1, 2) + Fraction(s, 6))
        * gamma_fn(1 + (2 * mf + s) / 6)
    )
    return -s * magnitude / denominator


def coeff_A_printed(m: AzimuthalNumber, j: int) -> float:
    """The A_j(m) formula with the Γ magnitudes attached to the opposite basis member.

    Kept for comparison only: with these values A₁ℱ₁ + A₂ℱ₂ grows like e^z.
    """
    mf = _require_positive(m)
    s = _check_j(j)
    magnitude = 2.0 * math.pi**1.5 * 6.0 ** float((s - 2 * mf) / 3)
    denominator = (
        3.0
        * gamma_fn(Fraction(1, 2) + mf / 3)
        * gamma_fn(Fraction(1, 2) - Fraction(s, 6))
        * gamma_fn(1 + (2 * mf - s) / 6)
    )
    return -s * magnitude / denominator


def coeff_A_wide(m: AzimuthalNumber, j: int, digits: int) -> Any:
    """:func:`coeff_A` with ``digits`` significant digits."""
    mf = _require_positive(m)
    s = _check_j(j)
    with mpmath.workdps(digits):
        magnitude = 2 * mpmath.pi ** mpmath.mpf(1.5) * mpmath.power(6, to_mpf((-s - 2 * mf) / 3))
        denominator = (
            3
            * gamma_wide(Fraction(1, 2) + mf / 3, digits)
            * gamma_wide(Fraction(1, 2) + Fraction(s, 6), digits)
            * gamma_wide(1 + (2 * mf + s) / 6, digits)
        )
        return -s * magnitude / denominator


@lru_cache(maxsize=128)
def _coefficients(numerator: int, wide: bool, digits: int) -> tuple[Any, Any]:
    m = AzimuthalNumber(numerator)
    if wide:
        return coeff_A_wide(m, 1, digits), coeff_A_wide(m, 2, digits)
    return coeff_A(m, 1), coeff_A(m, 2)


def _check_margin(loss: float, available: float, rho: float) -> None:
    if available - loss < MIN_MARGIN_DIGITS:
        raise PrecisionError(
            f"series branch at rho={rho:g} loses {loss:.1f} of {available:.1f} digits; "
            f"lower rho_switch or enable the wide accumulator"
        )


def _digit_loss(terms: Sequence[float], rho: float) -> float:
    largest = max(max(abs(float(t)) for t in terms), 1e-300)
    return max(0.0, math.log10(largest) + 0.75 * math.log10(max(rho, 1.0)))


def _series_fc(m: AzimuthalNumber, rho: float, tol: float, wide: bool, digits: int) -> Spinor2:
    """A₁ℱ₁ + A₂ℱ₂ for m > 0, with its cancellation checked against the available digits."""
    a1, a2 = _coefficients(m.numerator, wide, digits)
    if wide:
        f11, f12 = _basis_wide(m, Basis.F1, rho, digits)
        f21, f22 = _basis_wide(m, Basis.F2, rho, digits)
        with mpmath.workdps(digits):
            terms = (a1 * f11, a2 * f21, a1 * f12, a2 * f22)
            phi1 = terms[0] + terms[1]
            phi2 = terms[2] + terms[3]
        available = float(digits)
    else:
        f11, f12 = _basis_double(m, Basis.F1, rho, tol)
        f21, f22 = _basis_double(m, Basis.F2, rho, tol)
        terms = (a1 * f11, a2 * f21, a1 * f12, a2 * f22)
        phi1 = terms[0] + terms[1]
        phi2 = terms[2] + terms[3]
        available = min(-math.log10(tol), DOUBLE_DIGITS)
    _check_margin(_digit_loss(terms, rho), available, rho)
    return Spinor2(float(phi1), float(phi2))


@dataclass(frozen=True, slots=True)
class ConicParams:
    """Calibrated description of ℱ_c for one |m|: A₁, A₂ and the fitted far field."""

    m: AzimuthalNumber
    a1: float
    a2: float
    rho_switch: float
    far_field: FarField
    overlap_mismatch: float
    tol: float
    wide: bool = False
    digits: int = 0

    def __post_init__(self) -> None:
        lo, hi = RHO_SWITCH_RANGE
        if not lo <= self.rho_switch <= hi:
            raise DomainError(f"rho_switch must lie in [{lo}, {hi}], got {self.rho_switch}")
        if self.m.is_positive and not (self.a1 > 0 and self.a2 < 0):
            raise ConsistencyError(f"expected A1 > 0 and A2 < 0 for m={self.m}, got {self.a1}, {self.a2}")

    def as_dict(self) -> dict[str, Any]:
        return {
            "m": str(self.m),
            "a1": self.a1,
            "a2": self.a2,
            "rhoSwitch": self.rho_switch,
            "farField": self.far_field.as_dict(),
            "overlapMismatch": self.overlap_mismatch,
            "tol": self.tol,
            "wide": self.wide,
            "digits": self.digits,
        }


@dataclass(frozen=True, slots=True)
class _Resolved:
    tol: float
    rho_switch: float
    wide: bool
    digits: int


def _resolve(
    tol: float | None,
    rho_switch: float | None,
    wide: bool | None,
    settings: Settings | None,
) -> _Resolved:
    settings = settings or get_settings()
    if wide is not None and wide != settings.wide:
        settings = settings.replace(wide=wide)
    tol = settings.series_tol if tol is None else float(tol)
    if not 0.0 < tol < 1.0:
        raise DomainError(f"series tolerance must lie in (0, 1), got {tol}")
    rho_switch = settings.rho_switch if rho_switch is None else float(rho_switch)
    lo, hi = RHO_SWITCH_RANGE
    if not lo <= rho_switch <= hi:
        raise DomainError(f"rho_switch must lie in [{lo}, {hi}], got {rho_switch}")
    digits = settings.wide_digits if settings.wide else 0
    return _Resolved(tol, rho_switch, settings.wide, digits)


def _calibrate(m: AzimuthalNumber, opts: _Resolved) -> ConicParams:
    a1, a2 = _coefficients(m.numerator, opts.wide, opts.digits)
    rs = opts.rho_switch

    window = rho_of(np.linspace(z_of(rs - FIT_WINDOW), z_of(rs), FIT_SAMPLES))
    samples = [
        (float(r), _series_fc(m, float(r), opts.tol, opts.wide, opts.digits)) for r in window
    ]
    far_field = extract_far_field(samples, m, corrected=True, bounded=True)

    overlap = np.linspace(rs - OVERLAP_WINDOW, rs, OVERLAP_SAMPLES)
    far1, far2 = far_field_values(far_field, m, overlap, corrected=True)
    mismatch = 0.0
    for r, f1, f2 in zip(overlap, far1, far2):
        near = _series_fc(m, float(r), opts.tol, opts.wide, opts.digits)
        mismatch = max(mismatch, abs(near.phi1 - f1), abs(near.phi2 - f2))

    if mismatch > OVERLAP_FAILURE:
        raise ConsistencyError(
            f"series and far-field branches of F_c(m={m}) differ by {mismatch:.3g} "
            f"on [{rs - OVERLAP_WINDOW:g}, {rs:g}]; raise tol or lower rho_switch"
        )
    if mismatch > OVERLAP_TOLERANCE:
        logger.warning("F_c(m=%s) branch mismatch %.3g on the overlap window at rho_switch=%g", m, mismatch, rs)
    else:
        logger.info("F_c(m=%s) calibrated: mismatch %.3g at rho_switch=%g", m, mismatch, rs)

    return ConicParams(
        m=m,
        a1=float(a1),
        a2=float(a2),
        rho_switch=rs,
        far_field=far_field,
        overlap_mismatch=mismatch,
        tol=opts.tol,
        wide=opts.wide,
        digits=opts.digits,
    )


def conic_params(
    m: AzimuthalNumber,
    *,
    tol: float | None = None,
    rho_switch: float | None = None,
    wide: bool | None = None,
    settings: Settings | None = None,
) -> ConicParams:
    """Calibrated parameters for |m|, built once per configuration and cached."""
    opts = _resolve(tol, rho_switch, wide, settings)
    m_abs = abs(m)
    key = CalibrationKey(m_abs.numerator, opts.tol, opts.rho_switch, opts.wide, opts.digits)
    return calibration_store.get_or_create(key, lambda: _calibrate(m_abs, opts))


def conic_fc(
    m: AzimuthalNumber,
    rho: float,
    tol: float | None = None,
    *,
    rho_switch: float | None = None,
    wide: bool | None = None,
    settings: Settings | None = None,
) -> Spinor2:
    """ℱ_c(m; ρ): series for ρ ≤ rho_switch, calibrated far-field form beyond."""
    rho = _check_rho(rho)
    opts = _resolve(tol, rho_switch, wide, settings)
    m_abs = abs(m)
    if rho <= opts.rho_switch:
        value = _series_fc(m_abs, rho, opts.tol, opts.wide, opts.digits)
    else:
        params = conic_params(m_abs, tol=opts.tol, rho_switch=opts.rho_switch, wide=opts.wide, settings=settings)
        phi1, phi2 = far_field_values(params.far_field, m_abs, rho, corrected=True)
        value = Spinor2(float(phi1), float(phi2))
    return value if m.is_positive else value.swap()


def conic_fc_grid(
    m: AzimuthalNumber,
    rhos: Sequence[float] | np.ndarray,
    tol: float | None = None,
    *,
    rho_switch: float | None = None,
    wide: bool | None = None,
    settings: Settings | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """φ₁ and φ₂ of ℱ_c on ``rhos``, in grid order."""
    grid = np.asarray(rhos, dtype=float)
    if grid.ndim != 1:
        raise DomainError("rho grid must be one-dimensional")
    if np.any(~np.isfinite(grid)) or np.any(grid < 0):
        raise DomainError("rho grid must be finite and >= 0")
    opts = _resolve(tol, rho_switch, wide, settings)
    m_abs = abs(m)
    phi1 = np.empty_like(grid)
    phi2 = np.empty_like(grid)

    near = grid <= opts.rho_switch
    for i in np.flatnonzero(near):
        value = _series_fc(m_abs, float(grid[i]), opts.tol, opts.wide, opts.digits)
        phi1[i], phi2[i] = value.phi1, value.phi2
    if not np.all(near):
        params = conic_params(m_abs, tol=opts.tol, rho_switch=opts.rho_switch, wide=opts.wide, settings=settings)
        far = ~near
        phi1[far], phi2[far] = far_field_values(params.far_field, m_abs, grid[far], corrected=True)

    if m.is_positive:
        return phi1, phi2
    return phi2, phi1


def wavefunction(
    m: AzimuthalNumber,
    rho: float,
    theta: float,
    tol: float | None = None,
    **options: Any,
) -> np.ndarray:
    """Ψ = e^{imθ}(φ₁e^{-iθ/2}, φ₂e^{iθ/2}).

    The phases are applied as integer windings m∓1/2, which is what makes Ψ
    single-valued under θ → θ + 2π.
    """
    value = conic_fc(m, rho, tol, **options)
    return np.array(
        [
            value.phi1 * cmath.exp(1j * m.lower_phase * theta),
            value.phi2 * cmath.exp(1j * m.upper_phase * theta),
        ],
        dtype=complex,
    )
