import math

import numpy as np
import pytest
from scipy import special
from scipy.linalg import eigh_tridiagonal

from linstark.airy_core import definite_derivative_integral, definite_product_integral
from linstark.errors import GridTooNarrowError, InvalidParameterError, NoBoundStateError, QuadratureError
from linstark.models import GridSpec
from linstark.oracle import (
    default_grid,
    fd_eigenvalues,
    fd_richardson,
    gauss_legendre_panels,
    inverse_iteration,
    quadrature,
    quadrature_with_error,
    sturm_count,
    tridiagonal_eigenvalues,
)
from linstark.systems import symlin, system_factory


# quadrature


def test_smooth_integrals():
    assert quadrature(np.sin, 0.0, math.pi, tol=1e-14) == pytest.approx(2.0, abs=1e-13)
    assert quadrature(lambda x: np.exp(-x * x), -10.0, 10.0, tol=1e-14) == pytest.approx(math.sqrt(math.pi), abs=1e-13)


def test_error_estimate_is_returned():
    value, error = quadrature_with_error(lambda x: np.sqrt(x), 0.0, 1.0, tol=1e-10)
    assert value == pytest.approx(2.0 / 3.0, abs=1e-10)
    assert 0.0 <= error <= 1e-10


def test_relative_tolerance():
    value = quadrature(lambda x: 1e6 * np.cos(x), 0.0, 1.0, tol=0.0, rtol=1e-12)
    assert value == pytest.approx(1e6 * math.sin(1.0), rel=1e-12)


def test_reversed_and_empty_ranges():
    assert quadrature(np.cos, 1.0, 0.0) == pytest.approx(-math.sin(1.0))
    assert quadrature(np.cos, 2.0, 2.0) == 0.0


def test_interval_limit():
    with pytest.raises(QuadratureError):
        quadrature(lambda x: np.sin(1.0 / x), 1e-4, 1.0, tol=1e-14, limit=5)


def test_non_finite_integrand():
    with pytest.raises(QuadratureError):
        quadrature(lambda x: 1.0 / (x - 0.5), 0.0, 1.0)


def test_infinite_limits_are_rejected():
    with pytest.raises(InvalidParameterError):
        quadrature(np.exp, 0.0, math.inf)


def test_target_below_rounding_floor_is_met():
    value, error = quadrature_with_error(lambda x: 4.0 * np.sin(x), 0.0, math.pi, tol=5e-14)
    assert value == pytest.approx(8.0, abs=1e-13)
    assert 0.0 < error < 1e-12


def test_tiny_tolerance_on_airy_moment():
    zeta1 = 2.338107410459767
    value = quadrature(lambda z: z * special.airy(z - zeta1)[0] ** 2, 0.0, zeta1 + 20.0, tol=1e-16)
    assert value == pytest.approx(definite_product_integral(zeta1, zeta1, 1), rel=1e-12)


CLOSED_FORM_CASES = {
    "sin": (np.sin, 0.0, math.pi, lambda: 2.0),
    "exp": (np.exp, 0.0, 1.0, lambda: math.e - 1.0),
    "lorentzian": (lambda x: 1.0 / (1.0 + x * x), 0.0, 1.0, lambda: math.pi / 4.0),
    "quintic": (lambda x: x ** 5 - 3.0 * x, -1.0, 2.0, lambda: 6.0),
    "ai_squared": (lambda z: special.airy(z - 1.3)[0] ** 2, 0.0, 31.3,
                   lambda: definite_product_integral(1.3, 1.3, 0)),
    "ai_prime_squared": (lambda z: special.airy(z - 2.0)[1] ** 2, 0.0, 32.0,
                         lambda: definite_derivative_integral(2.0)),
}


@pytest.mark.parametrize("tol", [1e-6, 1e-10, 1e-14])
@pytest.mark.parametrize("case", sorted(CLOSED_FORM_CASES))
def test_error_estimate_bounds_true_error(case, tol):
    f, a, b, exact = CLOSED_FORM_CASES[case]
    value, error = quadrature_with_error(f, a, b, tol=tol)
    assert abs(value - exact()) <= error


def test_panel_rule():
    nodes, weights = gauss_legendre_panels(-1.0, 2.0, width=0.4, order=6)
    assert len(nodes) == 8 * 6
    assert np.all((nodes > -1.0) & (nodes < 2.0))
    assert np.dot(weights, nodes ** 5 - 3.0 * nodes) == pytest.approx(6.0, rel=1e-14)
    nodes, weights = gauss_legendre_panels(0.0, 30.0)
    assert np.dot(weights, special.airy(nodes - 1.3)[0] ** 2) == pytest.approx(
        definite_product_integral(1.3, 1.3, 0), rel=1e-13
    )


@pytest.mark.parametrize("args", [(1.0, 1.0), (0.0, math.inf), (0.0, 1.0, -0.5), (0.0, 1.0, 0.5, 0)])
def test_panel_rule_validation(args):
    with pytest.raises(InvalidParameterError):
        gauss_legendre_panels(*args)


# tridiagonal eigenproblems


def test_sturm_count():
    diag = np.array([1.0, 2.0, 3.0])
    off_sq = np.zeros(2)
    np.testing.assert_array_equal(sturm_count(diag, off_sq, np.array([0.5, 1.5, 2.5, 3.5])), [0, 1, 2, 3])


def test_multisection_matches_lapack(rng):
    diag = rng.uniform(-1.0, 1.0, 300)
    off = rng.uniform(-1.0, 1.0, 299)
    expected = eigh_tridiagonal(diag, off, eigvals_only=True)[:6]
    np.testing.assert_allclose(tridiagonal_eigenvalues(diag, off, 6), expected, atol=1e-12)


def test_inverse_iteration_gives_eigenvectors(rng):
    diag = rng.uniform(-1.0, 1.0, 100)
    off = rng.uniform(0.5, 1.0, 99)
    values = tridiagonal_eigenvalues(diag, off, 3)
    vectors = inverse_iteration(diag, off, values)
    matrix = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    np.testing.assert_allclose(matrix @ vectors, vectors * values, atol=1e-9)
    np.testing.assert_allclose(np.linalg.norm(vectors, axis=0), 1.0)


def test_too_many_eigenvalues():
    with pytest.raises(InvalidParameterError):
        tridiagonal_eigenvalues(np.ones(3), np.zeros(2), 4)


# finite-difference oracle


def test_default_grids():
    bouncer = system_factory.get_system("bouncer")
    grid = default_grid(bouncer, 0.0, count=3, points=101)
    assert grid.z_min == 0.0
    assert grid.z_max > 5.5 + 5.0
    symmetric = default_grid(system_factory.get_system("symmetric"), 0.2, count=4, points=101)
    assert symmetric.z_min == -symmetric.z_max


def test_bouncer_grid_must_start_at_floor():
    system = system_factory.get_system("bouncer")
    with pytest.raises(InvalidParameterError):
        fd_eigenvalues(system, 0.0, grid=GridSpec(z_min=-1.0, z_max=20.0, points=1001), count=1)


def test_narrow_grid_is_detected():
    system = system_factory.get_system("bouncer")
    with pytest.raises(GridTooNarrowError):
        fd_eigenvalues(system, 0.0, grid=GridSpec(z_min=0.0, z_max=4.0, points=2001), count=1)


def test_oracle_respects_bound_state_range():
    with pytest.raises(NoBoundStateError):
        fd_eigenvalues(system_factory.get_system("symmetric"), 1.0)


def test_nested_grid_sizes():
    with pytest.raises(InvalidParameterError):
        fd_richardson(system_factory.get_system("bouncer"), 0.0, points=20000)


def test_coarse_grid_is_close(scaled):
    system = system_factory.get_system("bouncer", scaled)
    levels = fd_eigenvalues(system, 0.0, count=2, grid=default_grid(system, 0.0, count=2, points=4001))
    np.testing.assert_allclose(levels, system.level_energies(2), rtol=1e-4)


@pytest.mark.slow
def test_bouncer_richardson_matches_exact():
    system = system_factory.get_system("bouncer")
    result = fd_richardson(system, 0.1, count=3)
    np.testing.assert_allclose(result.energies, system.exact_levels(3, 0.1), rtol=1e-5)
    np.testing.assert_allclose(result.observed_order, 2.0, atol=0.1)
    assert result.points == [20001, 10001, 5001]
    assert len(result.raw) == 3


@pytest.mark.slow
def test_symmetric_richardson_matches_roots():
    system = system_factory.get_system("symmetric")
    result = fd_richardson(system, 0.1, count=4)
    expected = [symlin.solve_perturbed(parity, n, 0.1).energy for parity, n in system.labels(4)]
    np.testing.assert_allclose(result.energies, expected, rtol=1e-5)
