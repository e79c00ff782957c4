import math

import numpy as np
import pytest
import sympy as sp
from pydantic import ValidationError
from scipy import integrate, special

from linstark.airy_core import (
    AI0,
    AIP0,
    BI0,
    BIP0,
    X_SWITCH,
    ai_and_derivative,
    airy,
    airy_eval,
    antideriv_derivative_product,
    antideriv_product,
    branch_mismatch,
    definite_derivative_integral,
    definite_product_integral,
    find_zero,
    symmetric_product_integral,
    zero_seed,
    zero_table,
)
from linstark.errors import IllConditionedError, InvalidParameterError, UnsupportedIdentityError
from linstark.models import ZeroTable
from linstark.verification import _total_derivative, identity_cases


def test_values_at_origin_match_gamma_closed_forms():
    assert AI0 == pytest.approx(1.0 / (3 ** (2 / 3) * special.gamma(2 / 3)), rel=1e-15)
    assert AIP0 == pytest.approx(-1.0 / (3 ** (1 / 3) * special.gamma(1 / 3)), rel=1e-15)
    assert BI0 == pytest.approx(1.0 / (3 ** (1 / 6) * special.gamma(2 / 3)), rel=1e-15)
    assert BIP0 == pytest.approx(3 ** (1 / 6) / special.gamma(1 / 3), rel=1e-15)


def test_oscillatory_side_matches_scipy():
    x = np.linspace(-30.0, 0.0, 601)
    ours = airy(x)
    reference = special.airy(x)
    for mine, theirs in zip(ours, reference):
        np.testing.assert_allclose(mine, theirs, rtol=0, atol=1e-11)


def test_monotone_side_matches_scipy():
    x = np.linspace(0.05, 30.0, 600)
    ours = airy(x)
    reference = special.airy(x)
    for mine, theirs in zip(ours, reference):
        np.testing.assert_allclose(mine, theirs, rtol=1e-10)


def test_wronskian(rng):
    x = rng.uniform(-20.0, 8.0, 1000)
    ai, aip, bi, bip = airy(x)
    assert np.max(np.abs(ai * bip - aip * bi - 1.0 / math.pi)) < 1e-11


@pytest.mark.parametrize("window", [(X_SWITCH - 0.5, X_SWITCH + 0.5), (-X_SWITCH - 0.5, -X_SWITCH + 0.5)])
def test_branches_agree_across_switch(window):
    assert branch_mismatch(*window) <= 1e-11


def test_scalar_input_gives_length_one_arrays():
    ai, aip, bi, bip = airy(1.0)
    assert ai.shape == (1,)
    assert ai[0] == pytest.approx(special.airy(1.0)[0], rel=1e-13)


def test_airy_eval_record():
    pair = airy_eval(-2.0)
    assert pair.aipp == pytest.approx(-2.0 * pair.ai)
    assert pair.wronskian == pytest.approx(1.0 / math.pi, abs=1e-13)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_arguments_are_rejected(bad):
    with pytest.raises(InvalidParameterError):
        airy_eval(bad)
    with pytest.raises(InvalidParameterError):
        airy(np.array([0.0, bad]))


# zeros


def test_first_zeros():
    assert find_zero("ai", 1) == pytest.approx(2.338107410459767, abs=1e-13)
    assert find_zero("ai_prime", 1) == pytest.approx(1.018792971647471, abs=1e-13)
    assert find_zero("ai", 2) == pytest.approx(4.087949444130971, abs=1e-13)


def test_zero_table_matches_scipy():
    a, ap, _, _ = special.ai_zeros(50)
    table = zero_table(50)
    np.testing.assert_allclose(table.zeta, -a, rtol=1e-11)
    np.testing.assert_allclose(table.chi, -ap, rtol=1e-11)


def test_zero_residuals_and_interleaving():
    table = zero_table(200)
    zeta = np.array(table.zeta)
    chi = np.array(table.chi)
    ai, _, _, _ = airy(-zeta)
    _, aip, _, _ = airy(-chi)
    assert np.max(np.abs(ai)) < 1e-12
    assert np.max(np.abs(aip)) < 1e-12
    assert np.all(chi < zeta)
    assert np.all(zeta[:-1] < chi[1:])


def test_zero_table_records_the_bound_it_meets():
    table = zero_table(1000)
    _, aip = ai_and_derivative(-np.array(table.chi))
    ai, _ = ai_and_derivative(-np.array(table.zeta))
    assert np.max(np.abs(aip)) < table.residual_tol
    assert np.max(np.abs(ai)) < table.residual_tol
    # rounding of the root dominates 1e-12 for the high Ai' zeros
    assert table.residual_tol > 1e-12
    assert zero_table(10).residual_tol == 1e-12


@pytest.mark.filterwarnings("error:invalid value encountered in power:RuntimeWarning")
@pytest.mark.parametrize("kind", ["ai", "ai_prime"])
def test_first_zero_emits_no_warning(kind):
    assert find_zero(kind, 1) > 1.0
    assert zero_table(3).count == 3


def test_zero_table_slices_are_consistent():
    big = zero_table(30)
    small = zero_table(10)
    assert small.zeta == big.zeta[:10]
    assert small.zeta_n(3) == big.zeta[2]
    assert small.chi_n(1) == big.chi[0]


def test_seeds_are_close_for_large_index():
    n = np.arange(10, 401)
    table = zero_table(400)
    assert np.max(np.abs(zero_seed("ai", n) - table.zeta[9:]) / table.zeta[9:]) < 1e-3
    assert np.max(np.abs(zero_seed("ai_prime", n) - table.chi[9:]) / table.chi[9:]) < 1e-3


@pytest.mark.parametrize("kind,n", [("ai", 0), ("ai_prime", -3)])
def test_zero_index_must_be_positive(kind, n):
    with pytest.raises(InvalidParameterError):
        find_zero(kind, n)


def test_zero_table_rejects_bad_interleaving():
    with pytest.raises(ValidationError):
        ZeroTable(zeta=[2.3, 4.1], chi=[1.0, 5.0])


# closed-form integrals


@pytest.mark.parametrize("case", identity_cases(), ids=lambda case: case[0])
def test_antiderivatives_differentiate_back_exactly(case):
    _, antiderivative, integrand, _ = case
    assert sp.simplify(_total_derivative(antiderivative) - integrand) == 0


def _quad(f, upper):
    value, _ = integrate.quad(f, 0.0, upper, epsabs=1e-13, epsrel=1e-12, limit=400)
    return value


@pytest.mark.parametrize("beta", [0.7, 2.338107410459767, 4.5])
@pytest.mark.parametrize("moment", [0, 1, 2])
def test_same_shift_definite_integrals(beta, moment):
    expected = _quad(lambda z: z ** moment * special.airy(z - beta)[0] ** 2, beta + 30.0)
    assert definite_product_integral(beta, beta, moment) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("moment", [0, 1])
def test_cross_shift_definite_integrals(moment):
    b1, b2 = 1.3, 3.9
    expected = _quad(lambda z: z ** moment * special.airy(z - b1)[0] * special.airy(z - b2)[0], 35.0)
    assert definite_product_integral(b1, b2, moment) == pytest.approx(expected, abs=1e-10)


def test_derivative_product_integral():
    beta = 3.1
    expected = _quad(lambda z: special.airy(z - beta)[1] ** 2, beta + 30.0)
    assert definite_derivative_integral(beta) == pytest.approx(expected, abs=1e-10)


def test_finite_limits():
    beta = 2.0
    expected = _quad(lambda z: z * special.airy(z - beta)[0] ** 2, 1.5)
    assert definite_product_integral(beta, beta, 1, 0.0, 1.5) == pytest.approx(expected, abs=1e-12)


def test_bouncer_eigenfunctions_are_orthogonal():
    zeta = zero_table(3).zeta
    assert definite_product_integral(zeta[0], zeta[2], 0) == pytest.approx(0.0, abs=1e-13)


def test_antiderivative_keeps_shape():
    x = np.linspace(0.0, 2.0, 6).reshape(2, 3)
    assert antideriv_product(x, 1.0, 1.0, 1).shape == (2, 3)
    assert antideriv_product(x, 1.0, 2.0, 0).shape == (2, 3)
    assert antideriv_derivative_product(x, 1.0).shape == (2, 3)
    assert isinstance(antideriv_product(0.5, 1.0, 1.0, 2), float)


def test_cross_shift_second_moment_is_unsupported():
    with pytest.raises(UnsupportedIdentityError):
        antideriv_product(0.0, 1.0, 2.0, 2)


def test_nearly_equal_shifts_are_ill_conditioned():
    with pytest.raises(IllConditionedError):
        antideriv_product(0.0, 1.0, 1.0 + 1e-9, 1)


def test_unknown_moment():
    with pytest.raises(InvalidParameterError):
        antideriv_product(0.0, 1.0, 1.0, 3)


def test_symmetric_folding():
    beta = 1.7
    half = definite_product_integral(beta, beta, 0)
    assert symmetric_product_integral(beta, beta, 0) == pytest.approx(2.0 * half)
    assert symmetric_product_integral(beta, beta, 1) == 0.0
    assert symmetric_product_integral(beta, 2.5, 1, parity_sign=-1) == pytest.approx(
        2.0 * definite_product_integral(beta, 2.5, 1)
    )
