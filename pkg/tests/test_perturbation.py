import math

import numpy as np
import pytest

from linstark.errors import InvalidParameterError
from linstark.perturbation import (
    dipole_matrix,
    reference_shift,
    resolve_family,
    second_order_energy,
    second_order_sum,
    tail_integral,
    third_order_check,
)
from linstark.systems import bouncer, symlin


@pytest.mark.parametrize("family", ["bouncer", "symlin_odd", "symlin_even"])
@pytest.mark.parametrize("n", [1, 2, 5])
def test_sum_rules(family, n):
    result = second_order_sum(family, n)
    assert result.relative_error < 1e-6
    assert result.tail_stable
    assert result.k_max == 2000


def test_sum_rule_targets():
    zeta2 = bouncer.level(2).zeta_n
    assert second_order_sum("bouncer5", 2).target == pytest.approx(zeta2 / 36)
    assert second_order_sum("odd7", 2).target == pytest.approx(7 * zeta2 / 36)
    chi2 = symlin.level("even", 2).dimensionless_energy
    assert second_order_sum("even7", 2).target == pytest.approx(5 * chi2 / 36)


def test_tail_correction_matters():
    result = second_order_sum("bouncer", 1, k_max=20)
    without_tail = abs(result.partial_sum - result.target) / result.target
    assert result.relative_error < without_tail


@pytest.mark.parametrize("family", ["bouncer", "symlin_odd", "symlin_even"])
def test_residual_does_not_grow_with_truncation(family):
    errors = [second_order_sum(family, 1, k_max=k).relative_error for k in (100, 150, 200, 300, 400)]
    # the symmetric-well families sit at rounding level already at k_max = 100
    assert all(later <= earlier + 1e-14 for earlier, later in zip(errors, errors[1:]))


def test_bouncer_residual_decreases_strictly():
    errors = [second_order_sum("bouncer", 1, k_max=k).relative_error for k in (100, 150, 200, 300, 400)]
    assert all(later < earlier for earlier, later in zip(errors, errors[1:]))
    assert errors[-1] < errors[0] / 10


def test_aliases():
    assert resolve_family("ODD7") == "symlin_odd"
    assert resolve_family("even7") == "symlin_even"
    assert resolve_family("bouncer5") == "bouncer"
    with pytest.raises(InvalidParameterError):
        resolve_family("harmonic")


def test_truncation_must_cover_level():
    with pytest.raises(InvalidParameterError):
        second_order_sum("bouncer", 5, k_max=40)
    with pytest.raises(InvalidParameterError):
        second_order_sum("bouncer", 0)


def test_unsettled_tail_is_flagged(monkeypatch, caplog):
    monkeypatch.setenv("LINSTARK_TOL", "1e-15")
    result = second_order_sum("symlin_odd", 1, k_max=40)
    assert not result.tail_stable
    assert "tail not settled" in caplog.text


def test_tail_integral_of_power_law():
    assert tail_integral(lambda k: k ** -3.0, 2.0) == pytest.approx(1 / 8, rel=1e-12)


@pytest.mark.parametrize("parity,coefficient", [("odd", -7 / 9), ("even", -5 / 9)])
def test_second_order_energy(parity, coefficient, scaled):
    family = "symlin_odd" if parity == "odd" else "symlin_even"
    x = symlin.level(parity, 1).dimensionless_energy
    shift = second_order_energy(family, 1, 0.1, scaled)
    assert shift == pytest.approx(coefficient * 0.01 * x * scaled.e0, rel=1e-6)


def test_bouncer_dipole_matrix():
    matrix = dipole_matrix("bouncer", 300)
    assert matrix.shape == (300, 300)
    np.testing.assert_allclose(matrix, matrix.T)
    assert matrix[0, 1] == pytest.approx(bouncer.dipole(1, 2))
    assert matrix[2, 2] == pytest.approx(bouncer.expectations(3).mean_z)


def test_symmetric_dipole_matrix():
    matrix = dipole_matrix("symlin", 150)
    assert matrix.shape == (300, 300)
    np.testing.assert_allclose(matrix, matrix.T)
    # basis chi_1, zeta_1, chi_2, zeta_2, ...
    assert matrix[0, 1] == pytest.approx(symlin.dipole_cross(1, 1))
    assert matrix[1, 2] == pytest.approx(symlin.dipole_cross(1, 2))
    assert matrix[0, 2] == 0.0
    assert np.all(np.diag(matrix) == 0.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_third_order_bouncer(n):
    result = third_order_check("bouncer", n)
    assert result.target == pytest.approx(4 * bouncer.level(n).zeta_n / 81)
    assert result.estimate == pytest.approx(result.target, rel=1e-4)
    assert result.tail_bound < 1e-4 * result.target


@pytest.mark.parametrize("parity", ["even", "odd"])
def test_third_order_symmetric_vanishes(parity):
    result = third_order_check("symmetric", 2, k_max=400, parity=parity)
    assert abs(result.estimate) < 1e-5
    assert result.parity == parity
    assert result.target == 0.0


def test_harmonic_reference_is_level_independent():
    values = {reference_shift("harmonic", 0.3, mass=2.0, omega=1.5, n=n) for n in range(4)}
    assert values == {-0.3 ** 2 / (2 * 2.0 * 1.5 ** 2)}


def test_infinite_well_reference():
    ground = reference_shift("infinite_well", 0.2, half_width=1.0, n=0)
    unperturbed = math.pi ** 2 / (8 * 0.5)
    assert ground == pytest.approx(0.04 / (12 * unperturbed) * (1 - 15 / math.pi ** 2))
    assert ground < 0
    assert reference_shift("infinite_well", 0.2, half_width=1.0, n=1) > 0


@pytest.mark.parametrize("kwargs", [
    {"kind": "harmonic"},
    {"kind": "infinite_well", "half_width": -1.0},
    {"kind": "infinite_well", "half_width": 1.0, "n": -1},
    {"kind": "morse", "omega": 1.0},
])
def test_reference_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        reference_shift(fbar=0.1, **kwargs)
