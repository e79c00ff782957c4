"""
Acceptance checks run by `linstark verify`.

Each check returns a list of CheckResult; run_checks aggregates them in a
fixed order so repeated runs print identical reports.
"""

import logging
import math
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np
import sympy as sp

from linstark.airy_core import (
    X_SWITCH,
    ai_and_derivative,
    airy,
    branch_mismatch,
    cross_shift_form,
    definite_derivative_integral,
    definite_product_integral,
    derivative_product_form,
    same_shift_form,
    zero_seed,
    zero_table,
)
from linstark.config import get_settings
from linstark.models import CheckResult
from linstark.oracle import fd_richardson, gauss_legendre_panels, quadrature
from linstark.perturbation import reference_shift, second_order_sum, third_order_check
from linstark.stark_expansion import solve_R, solve_series
from linstark.systems import bouncer, symlin, system_factory

logger = logging.getLogger(__name__)

SEED = 20240611


def _check(name: str, passed: bool, detail: str, value: Optional[float] = None) -> CheckResult:
    if not passed:
        logger.warning("check %s failed: %s", name, detail)
    return CheckResult(name=name, passed=bool(passed), detail=detail, value=value)


def check_airy() -> List[CheckResult]:
    rng = np.random.default_rng(SEED)
    x = rng.uniform(-20.0, 8.0, 1000)
    ai, aip, bi, bip = airy(x)
    wronskian = float(np.max(np.abs(ai * bip - aip * bi - 1.0 / math.pi)))
    positive = branch_mismatch(X_SWITCH - 0.5, X_SWITCH + 0.5)
    negative = branch_mismatch(-X_SWITCH - 0.5, -X_SWITCH + 0.5)
    return [
        _check("airy.wronskian", wronskian < 1e-11, f"max |W - 1/pi| = {wronskian:.2e}", wronskian),
        _check("airy.overlap_positive", positive <= 1e-11, f"branch mismatch {positive:.2e}", positive),
        _check("airy.overlap_negative", negative <= 1e-11, f"branch mismatch {negative:.2e}", negative),
    ]


def check_zeros() -> List[CheckResult]:
    table = zero_table(1000)
    zeta = np.array(table.zeta)
    chi = np.array(table.chi)
    ai, _ = ai_and_derivative(-zeta[:200])
    _, aip = ai_and_derivative(-chi[:200])
    residual = float(max(np.max(np.abs(ai)), np.max(np.abs(aip))))
    interleaved = bool(np.all(chi < zeta) and np.all(zeta[:-1] < chi[1:]))
    n = np.arange(10, 1001)
    seed_error = float(max(
        np.max(np.abs(zero_seed("ai", n) - zeta[9:]) / zeta[9:]),
        np.max(np.abs(zero_seed("ai_prime", n) - chi[9:]) / chi[9:]),
    ))
    return [
        _check("zeros.residual", residual < 1e-12, f"max residual for n <= 200: {residual:.2e}", residual),
        _check("zeros.interleaving", interleaved, "chi_n < zeta_n < chi_{n+1} for n <= 1000"),
        _check("zeros.seeds", seed_error < 1e-3, f"max seed error for n >= 10: {seed_error:.2e}", seed_error),
    ]


def _moments(psi: Callable, slope: Callable, lower: float, upper: float, energy: float):
    # one composite Gauss-Legendre rule per side of the kink at 0
    sides = [(lower, 0.0), (0.0, upper)] if lower < 0.0 else [(lower, upper)]
    panels = [gauss_legendre_panels(a, b) for a, b in sides]
    nodes = np.concatenate([p[0] for p in panels])
    weights = np.concatenate([p[1] for p in panels])
    density = psi(nodes) ** 2
    norm = float(np.dot(weights, density))
    mean_v = float(np.dot(weights, np.abs(nodes) * density))
    mean_t = float(np.dot(weights, slope(nodes) ** 2))
    return norm, mean_v / energy, mean_t / energy


def check_normalisation(levels: int = 10) -> List[CheckResult]:
    worst = 0.0
    for n in range(1, levels + 1):
        zeta = bouncer.level(n).zeta_n
        _, aip0 = ai_and_derivative(-zeta)

        def slope(z, zeta=zeta, aip0=aip0):
            return ai_and_derivative(z - zeta)[1] / aip0[0]

        norm, v, t = _moments(lambda z, n=n: bouncer.wavefunction(n, None, z), slope, 0.0, zeta + 20.0, zeta)
        worst = max(worst, abs(norm - 1.0), abs(v - 2.0 / 3.0), abs(t - 1.0 / 3.0))

        for parity in ("even", "odd"):
            x = symlin.level(parity, n).dimensionless_energy
            a0, ap0 = ai_and_derivative(-x)
            if parity == "odd":
                def slope(z, x=x, ap0=ap0):
                    return ai_and_derivative(np.abs(z) - x)[1] / (math.sqrt(2.0) * ap0[0])
            else:
                def slope(z, x=x, a0=a0):
                    return np.sign(z) * ai_and_derivative(np.abs(z) - x)[1] / (math.sqrt(2.0 * x) * a0[0])
            norm, v, t = _moments(
                lambda z, parity=parity, n=n: symlin.wavefunction(parity, n, None, z),
                slope, -(x + 20.0), x + 20.0, x,
            )
            worst = max(worst, abs(norm - 1.0), abs(v - 2.0 / 3.0), abs(t - 1.0 / 3.0))
    return [_check("normalisation_virial", worst < 1e-8,
                   f"worst deviation over n <= {levels}, both systems: {worst:.2e}", worst)]


def check_bouncer_stark() -> List[CheckResult]:
    system = system_factory.get_system("bouncer")
    result = fd_richardson(system, 0.1, count=3)
    exact = system.exact_levels(3, 0.1)
    rel = float(np.max(np.abs(np.array(result.energies) - exact) / exact))
    orders = bouncer.stark_orders(1)
    expected = {"c1": Fraction(2, 3), "c2": Fraction(-1, 9), "c3": Fraction(4, 81)}
    engine = solve_series("bouncer", None, 3).coefficients
    engine_ok = [sp.Rational(2, 3), sp.Rational(-1, 9), sp.Rational(4, 81)] == list(engine)
    return [
        _check("bouncer.fd_oracle", rel <= 1e-5, f"max relative error n <= 3 at delta=0.1: {rel:.2e}", rel),
        _check("bouncer.orders", orders == expected and engine_ok, f"orders {orders}, engine {list(engine)}"),
    ]


def _second_difference(parity: str, n: int, delta: float) -> float:
    e0 = symlin.level(parity, n).energy
    shifted = symlin.solve_perturbed(parity, n, delta).energy
    return (shifted - e0) / (delta ** 2 * e0)


def extrapolated_r2(parity: str, n: int, deltas=(0.2, 0.1, 0.05)) -> float:
    """Two Richardson levels over halving deltas; the estimate is R2 + R4 d^2 + ..."""
    d = [_second_difference(parity, n, delta) for delta in deltas]
    first = [(4.0 * d[i + 1] - d[i]) / 3.0 for i in range(len(d) - 1)]
    return (16.0 * first[1] - first[0]) / 15.0


def check_symmetric_stark(levels: int = 3) -> List[CheckResult]:
    results = []
    targets = {"odd": -7.0 / 9.0, "even": -5.0 / 9.0}
    for parity, target in targets.items():
        worst = max(abs(extrapolated_r2(parity, n) - target) / abs(target) for n in range(1, levels + 1))
        results.append(_check(f"symmetric.r2_{parity}", worst < 1e-3,
                              f"worst relative deviation from {target:.6f}: {worst:.2e}", worst))
        series = solve_R(parity, 3)
        exact = [0, sp.Rational(-7 if parity == "odd" else -5, 9), 0]
        results.append(_check(f"symmetric.engine_{parity}", list(series.coefficients) == exact,
                              f"R1..R3 = {series.as_strings()}"))
    return results


def check_wkb_bracket() -> List[CheckResult]:
    odd, even, wkb = Fraction(-7, 9), Fraction(-5, 9), Fraction(-2, 3)
    passed = (odd + even) / 2 == wkb and odd < wkb < even
    return [_check("wkb.bracket", passed, "(-7/9 + -5/9)/2 == -2/3 and -7/9 < -2/3 < -5/9")]


def check_sum_rules(levels: int = 5, tol: Optional[float] = None) -> List[CheckResult]:
    tol = tol or get_settings().tol
    results = []
    for family in ("bouncer", "symlin_odd", "symlin_even"):
        worst = max(second_order_sum(family, n).relative_error for n in range(1, levels + 1))
        results.append(_check(f"sumrule.{family}", worst < tol,
                              f"worst relative error n <= {levels}: {worst:.2e}", worst))
    return results


def check_third_order(levels: int = 3) -> List[CheckResult]:
    symmetric = max(
        abs(third_order_check("symmetric", n, parity=parity).estimate)
        for n in range(1, levels + 1) for parity in ("even", "odd")
    )
    bouncer_worst = 0.0
    for n in range(1, levels + 1):
        result = third_order_check("bouncer", n)
        bouncer_worst = max(bouncer_worst, abs(result.estimate - result.target) / result.target)
    return [
        _check("third_order.symmetric", symmetric < 1e-5, f"max |estimate| = {symmetric:.2e}", symmetric),
        _check("third_order.bouncer", bouncer_worst < 1e-4,
               f"worst relative deviation from 4 zeta_n / 81: {bouncer_worst:.2e}", bouncer_worst),
    ]


_X, _B1, _B2, _A, _AP, _BB, _BP = sp.symbols("x beta1 beta2 A Ap B Bp")


def _total_derivative(expr: sp.Expr) -> sp.Expr:
    """d/dx with A = Ai(x - beta1), B = Ai(x - beta2) and Ai'' = y Ai."""
    return (
        sp.diff(expr, _X)
        + sp.diff(expr, _A) * _AP + sp.diff(expr, _AP) * (_X - _B1) * _A
        + sp.diff(expr, _BB) * _BP + sp.diff(expr, _BP) * (_X - _B2) * _BB
    )


def identity_cases():
    """(name, antiderivative, integrand, same_shift) for every closed-form identity."""
    cases = [
        (f"same_shift_m{m}", same_shift_form(_X, _B1, _A, _AP, m), _X ** m * _A ** 2, True)
        for m in (0, 1, 2)
    ]
    cases += [
        (f"cross_shift_m{m}", cross_shift_form(_X, _B1, _B2, _A, _AP, _BB, _BP, m), _X ** m * _A * _BB, False)
        for m in (0, 1)
    ]
    cases.append(("derivative_product", derivative_product_form(_X, _B1, _A, _AP), _AP ** 2, True))
    return cases


def check_identities(points: int = 50, draws: int = 20) -> List[CheckResult]:
    rng = np.random.default_rng(SEED)
    symbolic_ok = True
    pointwise = 0.0
    for name, antiderivative, integrand, same in identity_cases():
        residual = sp.simplify(_total_derivative(antiderivative) - integrand)
        symbolic_ok &= residual == 0
        derivative = sp.lambdify((_X, _B1, _B2, _A, _AP, _BB, _BP), _total_derivative(antiderivative), "numpy")
        target = sp.lambdify((_X, _B1, _B2, _A, _AP, _BB, _BP), integrand, "numpy")
        x = rng.uniform(-3.0, 6.0, points)
        b1 = rng.uniform(0.5, 6.0, points)
        b2 = b1 if same else b1 + rng.uniform(0.5, 3.0, points)
        a, ap = ai_and_derivative(x - b1)
        b, bp = ai_and_derivative(x - b2)
        values = (x, b1, b2, a, ap, b, bp)
        scale = np.maximum(1.0, np.abs(target(*values)))
        pointwise = max(pointwise, float(np.max(np.abs(derivative(*values) - target(*values)) / scale)))

    definite = 0.0
    for _ in range(draws):
        beta1 = rng.uniform(0.5, 4.0)
        beta2 = beta1 + rng.uniform(0.5, 3.0)
        upper = max(beta1, beta2) + 25.0
        for moment in (0, 1, 2):
            closed = definite_product_integral(beta1, beta1, moment)
            numeric = quadrature(lambda z, m=moment: z ** m * ai_and_derivative(z - beta1)[0] ** 2, 0.0, upper, tol=1e-12)
            definite = max(definite, abs(closed - numeric))
        for moment in (0, 1):
            closed = definite_product_integral(beta1, beta2, moment)
            numeric = quadrature(
                lambda z, m=moment: z ** m * ai_and_derivative(z - beta1)[0] * ai_and_derivative(z - beta2)[0],
                0.0, upper, tol=1e-12,
            )
            definite = max(definite, abs(closed - numeric))
        closed = definite_derivative_integral(beta1)
        numeric = quadrature(lambda z: ai_and_derivative(z - beta1)[1] ** 2, 0.0, upper, tol=1e-12)
        definite = max(definite, abs(closed - numeric))

    return [
        _check("identities.exact_derivative", symbolic_ok, "antiderivatives differentiate back to their integrands"),
        _check("identities.pointwise", pointwise <= 1e-10, f"max pointwise residual {pointwise:.2e}", pointwise),
        _check("identities.definite", definite <= 1e-8, f"max |closed - quadrature| {definite:.2e}", definite),
    ]


def engine_residual_slope(parity: str, n: int = 1, deltas=(0.025, 0.05, 0.1, 0.2), order: int = 4) -> float:
    """Log-log slope of |root - truncated series| against delta."""
    series = solve_R(parity, order)
    base = symlin.level(parity, n)
    errors = []
    for delta in deltas:
        root = symlin.solve_perturbed(parity, n, delta).energy
        errors.append(abs(root - base.energy * series.evaluate(base.dimensionless_energy, delta)))
    slope, _ = np.polyfit(np.log(deltas), np.log(errors), 1)
    return float(slope)


def check_engine_vs_roots() -> List[CheckResult]:
    results = []
    for parity in ("odd", "even"):
        slope = engine_residual_slope(parity)
        results.append(_check(f"engine_vs_roots.{parity}", slope >= 4.7,
                              f"residual decays as delta^{slope:.2f}", slope))
    return results


def check_reference_shifts() -> List[CheckResult]:
    ground = reference_shift("infinite_well", 0.1, half_width=1.0, n=0)
    excited = reference_shift("infinite_well", 0.1, half_width=1.0, n=1)
    harmonic = {reference_shift("harmonic", 0.1, omega=2.0, n=n) for n in range(5)}
    return [
        _check("reference.infinite_well", ground < 0 < excited, f"n=0: {ground:.3e}, n=1: {excited:.3e}"),
        _check("reference.harmonic", len(harmonic) == 1 and next(iter(harmonic)) < 0, f"shift {harmonic}"),
    ]


CHECKS: Dict[str, Callable[[], List[CheckResult]]] = {
    "airy": check_airy,
    "zeros": check_zeros,
    "normalisation": check_normalisation,
    "bouncer_stark": check_bouncer_stark,
    "symmetric_stark": check_symmetric_stark,
    "wkb": check_wkb_bracket,
    "sumrules": check_sum_rules,
    "third_order": check_third_order,
    "identities": check_identities,
    "engine": check_engine_vs_roots,
    "reference": check_reference_shifts,
}


def run_checks(names: Optional[Iterable[str]] = None) -> List[CheckResult]:
    """Run the named checks (all by default) in registry order."""
    selected = list(CHECKS) if names is None else [name for name in CHECKS if name in set(names)]
    results: List[CheckResult] = []
    for name in selected:
        logger.info("running check group %s", name)
        results.extend(CHECKS[name]())
    return results
