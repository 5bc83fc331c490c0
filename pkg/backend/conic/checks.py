"""Self-checks of the whole pipeline, run by ``conic check``."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .asymptotics import connection_phase, phase_difference
from .config import Settings, get_settings
from .conic_core import Basis, basis_f1, basis_f2, conic_fc, conic_params, wavefunction
from .constants import OVERLAP_TOLERANCE
from .domain import AzimuthalNumber
from .errors import ConicError
from .ode_oracle import RESIDUAL_STEP, propagate, residual
from .potential import PotentialCurve
from .special_fn import gamma_fn, hyper0f3
from .zeeman import ZeemanParams, electronic_period, g_factor, matching_check, zeeman_splitting

logger = logging.getLogger(__name__)

TEST_MS = (AzimuthalNumber(1), AzimuthalNumber(3), AzimuthalNumber(5))
G_REFERENCE = {1: 0.961, 3: 0.543, 5: 0.396}
G_TOLERANCE = 0.002
ORACLE_POINTS = (0.5, 1.0, 2.0, 4.0)
TREND_MASSES = (1e6, 1e8, 1e10)
TREND_WINDOW = (0.02, 0.1)


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _gamma_recurrence(settings: Settings) -> tuple[bool, str]:
    worst = 0.0
    for x in np.linspace(1.0 / 6.0, 19.0, 60):
        expected = x * gamma_fn(x)
        worst = max(worst, abs(gamma_fn(x + 1.0) - expected) / abs(expected))
    return worst <= 1e-12, f"max relative error {worst:.2e}"


def _contiguous_derivative(settings: Settings) -> tuple[bool, str]:
    b = (1.0 / 3.0, 2.0 / 3.0, 1.0)
    worst = 0.0
    for z in (0.1, 1.0, 10.0, 100.0):
        h = max(z, 1.0) * settings.series_tol ** (1.0 / 3.0)
        numeric = (hyper0f3(*b, z + h).value - hyper0f3(*b, z - h).value) / (2.0 * h)
        exact = hyper0f3(b[0] + 1, b[1] + 1, b[2] + 1, z).value / (b[0] * b[1] * b[2])
        worst = max(worst, abs(numeric - exact) / abs(exact))
    return worst <= 1e-8, f"max relative error {worst:.2e}"


def _oracle_equivalence(settings: Settings) -> tuple[bool, str]:
    worst = 0.0
    for m in TEST_MS:
        for which, series in ((Basis.F1, basis_f1), (Basis.F2, basis_f2)):
            trajectory = propagate(m, which, max(ORACLE_POINTS))
            for rho in ORACLE_POINTS:
                ode = trajectory.spinor(rho)
                ref = series(m, rho, settings.series_tol)
                for a, b in zip(ode.as_tuple(), ref.as_tuple()):
                    worst = max(worst, abs(a - b) / abs(b))
    return worst <= 1e-8, f"max relative difference {worst:.2e}"


def _defect(settings: Settings) -> tuple[bool, str]:
    grid = np.linspace(0.1, settings.rho_switch - 2.0 * RESIDUAL_STEP, 80)
    worst = 0.0
    for m in TEST_MS:
        value = residual(m, lambda r, m=m: conic_fc(m, r, settings=settings), grid)
        worst = max(worst, value)
    return worst <= 1e-6, f"max relative residual {worst:.2e}"


def _component_swap(settings: Settings) -> tuple[bool, str]:
    grid = np.linspace(0.0, 2.0 * settings.rho_switch, 25)
    for m in TEST_MS:
        for rho in grid:
            if conic_fc(-m, rho, settings=settings) != conic_fc(m, rho, settings=settings).swap():
                return False, f"swap broken at m={m}, rho={rho:g}"
    return True, "exact on all grid points"


def _single_valued(settings: Settings) -> tuple[bool, str]:
    worst = 0.0
    for m in TEST_MS + tuple(-m for m in TEST_MS):
        for rho in (0.3, 2.0, 5.0):
            for theta in np.linspace(0.0, 2.0 * math.pi, 7):
                a = wavefunction(m, rho, theta, settings=settings)
                b = wavefunction(m, rho, theta + 2.0 * math.pi, settings=settings)
                worst = max(worst, float(np.max(np.abs(a - b))))
    return worst <= 1e-12, f"max |Psi(theta+2pi) - Psi(theta)| {worst:.2e}"


def _branch_consistency(settings: Settings) -> tuple[bool, str]:
    worst = max(conic_params(m, settings=settings).overlap_mismatch for m in TEST_MS)
    return worst <= OVERLAP_TOLERANCE, f"max overlap mismatch {worst:.2e} (limit {OVERLAP_TOLERANCE:g})"


def _anchors(settings: Settings) -> tuple[bool, str]:
    phase_err = amp_err = 0.0
    for m in TEST_MS:
        ff = conic_params(m, settings=settings).far_field
        phase_err = max(phase_err, phase_difference(ff.phase_phi, connection_phase(m)))
        amp_err = max(amp_err, abs(ff.amplitude_c - 1.0))
    ok = phase_err <= 1e-3 and amp_err <= 1e-3
    return ok, f"phase error {phase_err:.2e} rad, amplitude error {amp_err:.2e}"


def _g_values(settings: Settings) -> tuple[bool, str]:
    parts = []
    ok = True
    for m in TEST_MS:
        plus = g_factor(m, settings=settings).value
        minus = g_factor(-m, settings=settings).value
        ok &= abs(plus - G_REFERENCE[m.numerator]) <= G_TOLERANCE and abs(plus + minus) <= 1e-12
        parts.append(f"g({m})={plus:.6f}")
    return ok, ", ".join(parts)


def _period_closed_forms(settings: Settings) -> tuple[bool, str]:
    cone = electronic_period(PotentialCurve.parabolic_cone(1.0))
    vee = electronic_period(PotentialCurve.vee(1.0, 1.0))
    err = max(abs(cone - math.pi) / math.pi, abs(vee - 4.0) / 4.0)
    return err <= 1e-8, f"parabolic-cone {cone:.12g}, vee {vee:.12g}"


def _scaling_law(settings: Settings) -> tuple[bool, str]:
    m = TEST_MS[0]
    base = ZeemanParams(mass_ratio=1e6, field_b=1.0, t_e=1.0)
    heavy = ZeemanParams(mass_ratio=32e6, field_b=1.0, t_e=1.0)
    ratio = zeeman_splitting(m, base, 0.961) / zeeman_splitting(m, heavy, 0.961)
    ratio_err = abs(ratio - 2.0 ** (5.0 / 6.0)) / 2.0 ** (5.0 / 6.0)
    envelopes = [matching_check(m, M, TREND_WINDOW, settings=settings).envelope_deviation for M in TREND_MASSES]
    decreasing = all(a > b for a, b in zip(envelopes, envelopes[1:]))
    detail = f"ratio error {ratio_err:.1e}, envelope deviations " + ", ".join(f"{e:.2e}" for e in envelopes)
    return ratio_err <= 1e-14 and decreasing, detail


CHECKS: tuple[tuple[str, Callable[[Settings], tuple[bool, str]]], ...] = (
    ("gamma recurrence", _gamma_recurrence),
    ("0F3 contiguous derivative", _contiguous_derivative),
    ("oracle equivalence", _oracle_equivalence),
    ("defect test", _defect),
    ("component swap", _component_swap),
    ("single-valuedness", _single_valued),
    ("branch consistency", _branch_consistency),
    ("phase/amplitude anchors", _anchors),
    ("g regression and antisymmetry", _g_values),
    ("T_e closed forms", _period_closed_forms),
    ("scaling law", _scaling_law),
)


def run_checks(settings: Settings | None = None) -> list[CheckResult]:
    """Run every check; an exception counts as a failure of that check only."""
    settings = settings or get_settings()
    results = []
    for name, check in CHECKS:
        try:
            passed, detail = check(settings)
        except ConicError as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        logger.info("check %s: %s", name, "pass" if passed else "fail")
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
    return results
