import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import integrate

from conic.asymptotics import far_field_values, rho_of, z_of
from conic.config import Settings
from conic.conic_core import conic_params
from conic.domain import AzimuthalNumber
from conic.errors import DomainError, PrecisionError
from conic.potential import PotentialCurve
from conic.zeeman import (
    GResult,
    ZeemanParams,
    electronic_period,
    g_factor,
    level_pair,
    matching_check,
    tail_bound,
    tail_estimate,
    wkb_radial,
    zeeman_splitting,
)


@pytest.mark.parametrize("numerator, expected", [(1, 0.961), (3, 0.543), (5, 0.396)])
def test_g_regression(numerator, expected):
    result = g_factor(AzimuthalNumber(numerator))
    assert result.value == pytest.approx(expected, abs=0.002)
    assert result.quadrature_error + result.tail_bound < 1e-5
    assert result.rho_max > 6.0


def test_g_antisymmetry():
    m = AzimuthalNumber(3)
    assert g_factor(-m).value == -g_factor(m).value


def test_g_tolerance_range():
    with pytest.raises(DomainError):
        g_factor(AzimuthalNumber(1), tol=0.5)


def test_g_tail_beyond_cap():
    with pytest.raises(PrecisionError):
        g_factor(AzimuthalNumber(5), settings=Settings(rho_cap=10.0))


@pytest.mark.parametrize("numerator", [1, 5])
def test_g_reaches_the_tightest_tolerance(numerator):
    m = AzimuthalNumber(numerator)
    tight = g_factor(m, tol=1e-10)
    assert tight.tail_bound < 5e-11
    assert tight.rho_max < 1000.0
    assert tight.value == pytest.approx(g_factor(m).value, abs=2e-6)
    assert g_factor(m, tol=1e-8).value == pytest.approx(tight.value, abs=3e-8)


def test_tail_estimate_matches_direct_integration():
    m = AzimuthalNumber(1)
    ff = conic_params(m).far_field

    def integrand(z: float) -> float:
        rho = float(rho_of(z))
        phi1, phi2 = far_field_values(ff, m, rho, corrected=True)
        return float(np.sqrt(rho) * (phi1**2 - phi2**2))

    lo, hi = 20.0, 60.0
    direct, _ = integrate.quad(integrand, float(z_of(lo)), float(z_of(hi)), epsabs=1e-12, epsrel=0.0, limit=2000)
    closed = tail_estimate(m, ff.amplitude_c, ff.phase_phi, lo) - tail_estimate(m, ff.amplitude_c, ff.phase_phi, hi)
    slack = tail_bound(m, ff.amplitude_c, ff.a_minus_inf, lo) + tail_bound(m, ff.amplitude_c, ff.a_minus_inf, hi)
    assert abs(direct - closed) <= slack + 1e-10
    assert slack < 1e-2 * abs(direct)


def test_tail_bound_decreases():
    m = AzimuthalNumber(1)
    values = [tail_bound(m, 1.0, 0.5, rho) for rho in (8.0, 20.0, 100.0)]
    assert values[0] > values[1] > values[2] > 0


def test_g_result_serialization():
    result = GResult(AzimuthalNumber(1), 0.96, 1e-8, 2e-7, 40.0)
    assert result.as_dict() == {"m": "1/2", "value": 0.96, "error": 1e-8, "tailBound": 2e-7, "rhoMax": 40.0}
    with pytest.raises(DomainError):
        GResult(AzimuthalNumber(1), 0.96, -1.0, 0.0, 40.0)


@pytest.mark.parametrize(
    "curve, expected",
    [
        (PotentialCurve.parabolic_cone(1.0), math.pi),
        (PotentialCurve.parabolic_cone(4.0), 2.0 * math.pi),
        (PotentialCurve.vee(1.0, 1.0), 4.0),
        (PotentialCurve.vee(4.0, 2.0), 4.0),
        (PotentialCurve.parabolic_cone(1.0).scaled(4.0), math.pi / 2.0),
    ],
)
def test_period_closed_forms(curve, expected):
    assert electronic_period(curve) == pytest.approx(expected, rel=1e-9)


def test_period_additivity():
    curve = PotentialCurve.vee(2.0, 1.0)
    assert electronic_period(curve, split_at=0.3) == pytest.approx(electronic_period(curve), rel=1e-9)
    with pytest.raises(DomainError):
        electronic_period(curve, split_at=2.0)


def test_period_of_table():
    r = np.linspace(-0.1, 1.1, 100)
    curve = PotentialCurve.tabulated(r, -r * (1.0 - r))
    assert electronic_period(curve, tol=1e-8) == pytest.approx(math.pi, rel=1e-2)


def test_zeeman_params_validation():
    assert ZeemanParams(mass_ratio=1e6, field_b=0.0, t_e=1.0).epsilon == pytest.approx(0.01)
    with pytest.raises(ValidationError):
        ZeemanParams(mass_ratio=0.0, field_b=1.0, t_e=1.0)
    with pytest.raises(ValidationError):
        ZeemanParams(mass_ratio=1e6, field_b=-1.0, t_e=1.0)


def test_splitting_value():
    p = ZeemanParams(mass_ratio=1e6, field_b=1.0, t_e=1.0)
    assert zeeman_splitting(AzimuthalNumber(1), p, 0.961) == pytest.approx(0.0961, rel=1e-12)
    assert zeeman_splitting(AzimuthalNumber(1), p.model_copy(update={"field_b": 0.0}), 0.961) == 0.0


def test_scaling_law():
    m = AzimuthalNumber(1)
    light = ZeemanParams(mass_ratio=1e6, field_b=1.0, t_e=1.0)
    heavy = ZeemanParams(mass_ratio=32e6, field_b=1.0, t_e=1.0)
    ratio = zeeman_splitting(m, light, 0.961) / zeeman_splitting(m, heavy, 0.961)
    assert ratio == pytest.approx(2.0 ** (5.0 / 6.0), rel=1e-14)


def test_level_pair():
    p = ZeemanParams(mass_ratio=1e6, field_b=2.0, t_e=1.0)
    levels = level_pair(AzimuthalNumber(3), p, 0.5)
    assert levels.upper == -levels.lower
    assert levels.splitting == pytest.approx(levels.upper - levels.lower)
    assert levels.as_dict()["m"] == "3/2"


def test_wkb_radial():
    assert isinstance(wkb_radial(0.5, 1e6, 1.0, 0.0), float)
    assert wkb_radial(1.0, 9.0, 2.0, 0.0) == pytest.approx(2.0 * math.cos(2.0))
    with pytest.raises(DomainError):
        wkb_radial([0.0, 1.0], 1e6, 1.0, 0.0)


def test_matching_check_close_for_heavy_nuclei():
    report = matching_check(AzimuthalNumber(1), 1e8, (0.02, 0.1))
    assert report.envelope_deviation < 0.02
    assert report.phase_deviation < 0.02
    assert report.samples == 64


def test_matching_check_wide_window_at_large_mass():
    report = matching_check(AzimuthalNumber(1), 1e9, (1e-2, 0.1))
    assert report.envelope_deviation <= 0.02
    assert report.phase_deviation <= 1e-2


def test_matching_improves_with_mass():
    m = AzimuthalNumber(3)
    envelopes = [matching_check(m, M, (0.02, 0.1)).envelope_deviation for M in (1e6, 1e8, 1e10)]
    assert envelopes[0] > envelopes[1] > envelopes[2]


def test_matching_window_precondition():
    with pytest.raises(DomainError):
        matching_check(AzimuthalNumber(1), 1e6, (0.01, 0.1))
    with pytest.raises(DomainError):
        matching_check(AzimuthalNumber(1), 1e8, (0.05, 0.2))
