import numpy as np
import pytest
from pydantic import ValidationError

from conic.asymptotics import leading_asymptote
from conic.conic_core import Basis, basis_f1, basis_f2, conic_fc
from conic.domain import AzimuthalNumber, Spinor2
from conic.errors import DomainError, RangeError
from conic.ode_oracle import IntegratorConfig, OdeState, propagate, radial_rhs, residual, seed_state


def test_rhs_pure_coupling():
    assert radial_rhs(AzimuthalNumber(1), 1.0, OdeState(1.0, 0.0, 0.0, 0.0)) == OdeState(0.0, 0.0, 0.0, 1.0)


def test_rhs_all_terms():
    out = radial_rhs(AzimuthalNumber(3), 2.0, OdeState(1.0, 1.0, 1.0, 1.0))
    assert out.as_tuple() == pytest.approx((1.0, 1.75, 1.0, 2.5))


def test_rhs_singular_at_origin():
    with pytest.raises(DomainError):
        radial_rhs(AzimuthalNumber(1), 0.0, OdeState(1.0, 0.0, 0.0, 0.0))


def test_state_must_be_finite():
    with pytest.raises(RangeError):
        OdeState(float("inf"), 0.0, 0.0, 0.0)


def test_seed_matches_series():
    m = AzimuthalNumber(3)
    seed = seed_state(m, Basis.F2, 1e-2)
    series = basis_f2(m, 1e-2)
    assert seed.phi1 == pytest.approx(series.phi1, rel=1e-14)
    assert seed.phi2 == pytest.approx(series.phi2, rel=1e-14)


@pytest.mark.parametrize("numerator", [1, 3, 5])
@pytest.mark.parametrize("which, series", [(Basis.F1, basis_f1), (Basis.F2, basis_f2)])
def test_oracle_equivalence(numerator, which, series):
    m = AzimuthalNumber(numerator)
    trajectory = propagate(m, which, 4.0)
    for rho in (0.5, 1.0, 2.0, 4.0):
        ode = trajectory.spinor(rho)
        ref = series(m, rho)
        assert ode.phi1 == pytest.approx(ref.phi1, rel=1e-8)
        assert ode.phi2 == pytest.approx(ref.phi2, rel=1e-8)


def test_rk45_agrees():
    m = AzimuthalNumber(1)
    trajectory = propagate(m, "F1", 2.0, IntegratorConfig(method="RK45"))
    assert trajectory.spinor(2.0).phi1 == pytest.approx(basis_f1(m, 2.0).phi1, rel=1e-7)


def test_linearity():
    m = AzimuthalNumber(3)
    base = propagate(m, Basis.F1, 3.0)
    scaled = propagate(m, Basis.F1, 3.0, seed_scale=3.0)
    for rho in (0.5, 3.0):
        np.testing.assert_allclose(scaled.at(rho).as_tuple(), np.multiply(3.0, base.at(rho).as_tuple()), rtol=1e-9)


def test_trajectory_dense_output():
    trajectory = propagate(AzimuthalNumber(1), Basis.F2, 1.5)
    assert len(trajectory) > 2
    phi1, phi2 = trajectory.values([0.5, 1.0])
    assert phi2[1] == pytest.approx(trajectory.spinor(1.0).phi2)
    with pytest.raises(DomainError):
        trajectory.at(2.0)


def test_propagation_is_capped():
    with pytest.raises(DomainError):
        propagate(AzimuthalNumber(1), Basis.F1, 11.0)
    with pytest.raises(DomainError):
        propagate(AzimuthalNumber(1), Basis.F1, 1e-4)


def test_integrator_config_validation():
    with pytest.raises(ValidationError):
        IntegratorConfig(rel_tol=0.0)
    with pytest.raises(ValidationError):
        IntegratorConfig(method="Euler")


def test_residual_of_non_solution_is_order_one():
    value = residual(AzimuthalNumber(1), lambda rho: Spinor2(1.0, 1.0), [1.0, 2.0])
    assert value == pytest.approx(1.0)


@pytest.mark.parametrize("numerator", [1, -3, 5])
def test_bounded_solution_has_small_defect(numerator):
    m = AzimuthalNumber(numerator)
    grid = np.linspace(0.1, 5.9, 30)
    assert residual(m, lambda rho: conic_fc(m, rho), grid) < 1e-6


def test_residual_needs_room_for_the_stencil():
    with pytest.raises(DomainError):
        residual(AzimuthalNumber(1), lambda rho: Spinor2(1.0, 1.0), [0.01])


def test_error_shrinks_with_tolerance():
    m = AzimuthalNumber(1)

    def worst(rel_tol: float) -> float:
        cfg = IntegratorConfig(rel_tol=rel_tol, max_step=1.0)
        errors = []
        for rho_end in (2.0, 3.0, 4.0):
            end = propagate(m, Basis.F1, rho_end, cfg).spinor(rho_end)
            errors.append(abs(end.phi1 / basis_f1(m, rho_end).phi1 - 1.0))
        return max(errors)

    loose, tight = worst(1e-5), worst(1e-8)
    assert tight < 1e-6
    assert loose > 10.0 * tight


def test_leading_asymptote_defect_decays():
    m = AzimuthalNumber(1)
    windows = [np.linspace(lo, lo + 3.0, 61) for lo in (20.0, 23.5, 27.0)]
    values = [residual(m, lambda rho: leading_asymptote(m, rho), grid) for grid in windows]
    assert values[0] > values[1] > values[2]
    assert values[0] < 1e-3
