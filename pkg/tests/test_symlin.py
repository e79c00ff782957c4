import math

import numpy as np
import pytest
from scipy import integrate, optimize, special

from linstark.errors import InvalidParameterError, NoBoundStateError
from linstark.models import StarkInput
from linstark.systems import symlin, system_factory
from linstark.systems.symlin import SymmetricLinearWell

CHI1 = 1.018792971647471
ZETA1 = 2.338107410459767


def _quad(f, lower, upper):
    # the integrands are smooth on each side of the kink at 0
    left, _ = integrate.quad(f, lower, 0.0, limit=300, epsabs=1e-13, epsrel=1e-12)
    right, _ = integrate.quad(f, 0.0, upper, limit=300, epsabs=1e-13, epsrel=1e-12)
    return left + right


def _scipy_condition(eps, delta):
    y_r = eps / (1 + delta) ** (2 / 3)
    y_l = eps / (1 - delta) ** (2 / 3)
    a_l, ap_l, _, _ = special.airy(-y_l)
    a_r, ap_r, _, _ = special.airy(-y_r)
    return (1 + delta) ** (1 / 3) * a_l * ap_r + (1 - delta) ** (1 / 3) * a_r * ap_l


def test_levels(scaled):
    assert symlin.level("even", 1).energy == pytest.approx(CHI1, rel=1e-14)
    assert symlin.level("odd", 1).energy == pytest.approx(ZETA1, rel=1e-14)
    assert symlin.level("odd", 1, scaled).energy == pytest.approx(ZETA1 * scaled.e0)


def test_bad_parity():
    with pytest.raises(InvalidParameterError):
        symlin.level("both", 1)


@pytest.mark.parametrize("parity", ["even", "odd"])
@pytest.mark.parametrize("n", [1, 3])
def test_wavefunction_is_normalised(parity, n):
    top = symlin.level(parity, n).dimensionless_energy + 25.0
    norm = _quad(lambda z: symlin.wavefunction(parity, n, None, z) ** 2, -top, top)
    assert norm == pytest.approx(1.0, abs=1e-10)


def test_wavefunction_parity():
    z = np.linspace(0.1, 5.0, 7)
    np.testing.assert_allclose(symlin.wavefunction("odd", 2, None, -z), -symlin.wavefunction("odd", 2, None, z))
    np.testing.assert_allclose(symlin.wavefunction("even", 2, None, -z), symlin.wavefunction("even", 2, None, z))
    assert symlin.wavefunction("odd", 1, None, 0.0) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("parity", ["even", "odd"])
def test_expectations(parity, scaled):
    result = symlin.expectations(parity, 2, scaled)
    energy = symlin.level(parity, 2, scaled).energy
    assert result.mean_V == pytest.approx(2 * energy / 3)
    assert result.mean_T == pytest.approx(energy / 3)
    assert result.mean_z == 0.0
    assert result.mean_abs_z == pytest.approx(result.mean_V / scaled.slope)


def test_mean_abs_z_by_quadrature():
    value = _quad(lambda z: abs(z) * symlin.wavefunction("even", 2, None, z) ** 2, -35.0, 35.0)
    assert value == pytest.approx(symlin.expectations("even", 2).mean_abs_z, rel=1e-9)


@pytest.mark.parametrize("n_odd,k_even", [(1, 1), (1, 2), (2, 1), (2, 4)])
def test_cross_dipole_matches_quadrature(n_odd, k_even):
    value = _quad(
        lambda z: z * symlin.wavefunction("odd", n_odd, None, z) * symlin.wavefunction("even", k_even, None, z),
        -40.0, 40.0,
    )
    assert symlin.dipole_cross(n_odd, k_even) == pytest.approx(value, abs=1e-10)


def test_ground_pair_dipole():
    expected = -2.0 / (math.sqrt(CHI1) * (CHI1 - ZETA1) ** 3)
    assert symlin.dipole_cross(1, 1) == pytest.approx(expected, rel=1e-13)
    assert symlin.dipole_cross(1, 1) > 0


def test_dipole_parity_selection():
    assert symlin.dipole("even", 1, "even", 2) == 0.0
    assert symlin.dipole("odd", 1, "odd", 3) == 0.0
    assert symlin.dipole("even", 2, "odd", 1) == symlin.dipole_cross(1, 2)
    assert symlin.dipole("odd", 1, "even", 2) == symlin.dipole_cross(1, 2)


def test_condition_vanishes_on_unperturbed_levels():
    assert symlin.eigencondition(CHI1, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert symlin.eigencondition(ZETA1, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert abs(symlin.eigencondition(1.7, 0.0)) > 1e-3


@pytest.mark.parametrize("parity,n", [("even", 1), ("odd", 1), ("even", 3), ("odd", 2)])
@pytest.mark.parametrize("delta", [0.05, 0.2])
def test_root_matches_independent_solve(parity, n, delta):
    state = symlin.solve_perturbed(parity, n, delta)
    x = symlin.level(parity, n).dimensionless_energy
    expected = optimize.brentq(_scipy_condition, 0.9 * x, 1.05 * x, args=(delta,), xtol=1e-15, rtol=1e-15)
    assert state.energy == pytest.approx(expected, rel=1e-12)
    assert abs(state.residual) < 1e-12


def test_roots_are_even_in_delta():
    assert symlin.solve_perturbed("odd", 2, 0.15).energy == pytest.approx(
        symlin.solve_perturbed("odd", 2, -0.15).energy, rel=1e-13
    )


@pytest.mark.parametrize("energy", [0.3, 1.7, 2.9, 6.25, 11.0])
@pytest.mark.parametrize("delta", [0.05, 0.17, 0.29])
def test_condition_is_even_in_delta(energy, delta, scaled):
    assert symlin.eigencondition(energy, delta) == pytest.approx(
        symlin.eigencondition(energy, -delta), rel=1e-14, abs=1e-16
    )
    physical = energy * scaled.e0
    assert symlin.eigencondition(physical, delta, scaled) == pytest.approx(
        symlin.eigencondition(physical, -delta, scaled), rel=1e-14, abs=1e-16
    )


def test_perturbed_state_fields(scaled):
    state = symlin.solve_perturbed("even", 1, 0.1, scaled)
    assert state.f_r == pytest.approx(1.1 * scaled.slope)
    assert state.f_l == pytest.approx(0.9 * scaled.slope)
    assert state.rho_r < scaled.rho < state.rho_l
    assert state.energy < symlin.level("even", 1, scaled).energy


def test_alpha_ratio_at_zero_field():
    assert symlin.solve_perturbed("odd", 1, 0.0).alpha_ratio == pytest.approx(-1.0, rel=1e-10)
    assert symlin.solve_perturbed("even", 1, 0.0).alpha_ratio == pytest.approx(1.0, rel=1e-10)


def test_solver_limits():
    with pytest.raises(InvalidParameterError):
        symlin.solve_perturbed("odd", 1, 0.5)
    assert symlin.solve_perturbed("odd", 1, 0.4, delta_limit=0.5).energy < ZETA1
    with pytest.raises(NoBoundStateError):
        symlin.solve_perturbed("odd", 1, 1.0)


def test_second_order_estimate_tracks_root(unit_scales):
    delta = 0.02
    root = symlin.solve_perturbed("odd", 1, delta).energy
    estimate = symlin.stark_estimate("odd", 1, unit_scales, StarkInput.from_delta(delta, unit_scales))
    assert estimate == pytest.approx(ZETA1 * (1 - 7 * delta ** 2 / 9))
    assert abs(estimate - root) < 0.05 * abs(estimate - ZETA1)


def test_wkb_map():
    assert symlin.wkb_index("even", 1) == 0
    assert symlin.wkb_index("odd", 1) == 1
    assert symlin.wkb_index("even", 3) == 4
    assert symlin.wkb_energy(1, 0.0) == pytest.approx((9 * math.pi / 8) ** (2 / 3))
    assert symlin.wkb_energy(2, 0.3) == pytest.approx(symlin.wkb_energy(2, 0.0) * 0.91 ** (2 / 3))


def test_wkb_close_to_exact_tower():
    system = SymmetricLinearWell()
    exact = system.exact_levels(8)
    wkb = system.wkb_levels(8)
    assert np.all(np.abs(wkb - exact) / exact < 0.12)
    assert abs(wkb[-1] - exact[-1]) / exact[-1] < 2e-3


def test_system_class():
    system = system_factory.get_system("symlin")
    assert isinstance(system, SymmetricLinearWell)
    assert system.labels(4) == [("even", 1), ("odd", 1), ("even", 2), ("odd", 2)]
    np.testing.assert_allclose(system.exact_levels(2), [CHI1, ZETA1], rtol=1e-14)
    shifted = system.exact_levels(4, 0.1)
    assert shifted[3] == pytest.approx(symlin.solve_perturbed("odd", 2, 0.1).energy, rel=1e-13)
    np.testing.assert_allclose(system.potential(np.array([-2.0, 2.0]), 0.25), [1.5, 2.5])
    with pytest.raises(NoBoundStateError):
        system.exact_levels(2, 1.0)
