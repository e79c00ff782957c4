"""
Exact Stark expansion of the linear-potential eigenvalue conditions.

A level is written E = x e0 (1 + R_1 delta + R_2 delta^2 + ...) with x the
unperturbed eigenvalue. The Airy factors in the eigenvalue condition are
Taylor-expanded about -x. Every derivative reduces through Ai'' = y Ai to
P(y) Ai(y) + Q(y) Ai'(y), so after the vanishing factor (Ai(-x) = 0 or
Ai'(-x) = 0) is applied, the condition is a power series in delta whose
coefficients are polynomials in x and the R_i times a single non-zero
Airy factor squared. Setting each coefficient to zero fixes R_k in turn.

All arithmetic is exact (sympy rationals).
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from linstark.config import get_settings
from linstark.errors import ExpansionError, InvalidParameterError
from linstark.models import Parity

logger = logging.getLogger(__name__)

Y = sp.Symbol("y")
X = sp.Symbol("x", positive=True)

Series = List[sp.Expr]


def _poly(expr) -> sp.Poly:
    return sp.Poly(expr, Y, domain="QQ")


@dataclass(frozen=True)
class AiryExpr:
    """P(y) Ai(y) + Q(y) Ai'(y) with rational polynomials P, Q."""

    p: sp.Poly
    q: sp.Poly

    @classmethod
    def ai(cls) -> "AiryExpr":
        return cls(_poly(1), _poly(0))

    @classmethod
    def ai_prime(cls) -> "AiryExpr":
        return cls(_poly(0), _poly(1))

    def as_expr(self) -> sp.Expr:
        return self.p.as_expr() * sp.airyai(Y) + self.q.as_expr() * sp.airyaiprime(Y)

    def at(self, point: sp.Expr) -> Tuple[sp.Expr, sp.Expr]:
        """(P(point), Q(point))."""
        return self.p.as_expr().subs(Y, point), self.q.as_expr().subs(Y, point)


def differentiate(expr: AiryExpr) -> AiryExpr:
    """d/dy of P Ai + Q Ai' is (P' + y Q) Ai + (P + Q') Ai'."""
    y = _poly(Y)
    return AiryExpr(expr.p.diff(Y) + y * expr.q, expr.p + expr.q.diff(Y))


def _check_order(order: int) -> None:
    limit = get_settings().max_expansion_order
    if order < 0:
        raise InvalidParameterError(f"order must be >= 0, got {order}")
    if order > limit:
        raise InvalidParameterError(f"order {order} exceeds the engine limit {limit}")


@lru_cache(maxsize=None)
def _derivatives(count: int) -> Tuple[AiryExpr, ...]:
    chain = [AiryExpr.ai()]
    for _ in range(count):
        chain.append(differentiate(chain[-1]))
    return tuple(chain)


def taylor_shift(which: str, order: int) -> List[AiryExpr]:
    """
    Coefficients of delta^k, k = 0..order, in f(y + delta) for f = Ai or Ai'.

    Each coefficient is the k-th derivative of f divided by k!.
    """
    _check_order(order)
    if which not in ("ai", "ai_prime"):
        raise InvalidParameterError(f"unknown Airy function '{which}'")
    start = 0 if which == "ai" else 1
    chain = _derivatives(order + start)
    out = []
    for k in range(order + 1):
        d = chain[k + start]
        scale = sp.Rational(1, sp.factorial(k))
        out.append(AiryExpr(d.p * scale, d.q * scale))
    return out


# ---------------------------------------------------------------------------
# Truncated delta series


def _mul(a: Series, b: Series, order: int) -> Series:
    return [
        sp.expand(sum((a[i] * b[k - i] for i in range(k + 1)), sp.Integer(0)))
        for k in range(order + 1)
    ]


def _add(a: Series, b: Series) -> Series:
    return [sp.expand(u + v) for u, v in zip(a, b)]


def binomial_series(exponent: sp.Rational, order: int, sign: int = 1) -> Series:
    """(1 + sign * delta)^exponent."""
    out = [sp.Integer(1)]
    for k in range(1, order + 1):
        out.append(out[-1] * (exponent - k + 1) / k * sign)
    return out


def _compose(factor: Sequence[sp.Expr], shift: Series, order: int) -> Series:
    """sum_k factor[k] * shift^k, with shift = O(delta)."""
    result: Series = [sp.Integer(0)] * (order + 1)
    power: Series = [sp.Integer(1)] + [sp.Integer(0)] * order
    for k in range(order + 1):
        result = _add(result, [sp.expand(factor[k] * c) for c in power])
        power = _mul(power, shift, order)
    return result


@dataclass(frozen=True)
class ConditionSeries:
    """
    Delta-expansion of an eigenvalue condition about x.

    `coefficients[k]` multiplies delta^k; the common Airy factor named by
    `factor` has been divided out.
    """

    system: str
    parity: Optional[Parity]
    order: int
    coefficients: Tuple[sp.Expr, ...]
    unknowns: Tuple[sp.Symbol, ...]
    factor: str

    def as_strings(self) -> Dict[str, str]:
        return {f"delta^{k}": str(c) for k, c in enumerate(self.coefficients)}


def _unknowns(order: int) -> Tuple[sp.Symbol, ...]:
    return tuple(sp.Symbol(f"R{k}") for k in range(1, order + 1))


@lru_cache(maxsize=None)
def expand_condition(system: str, parity: Optional[Parity], order: int) -> ConditionSeries:
    """
    Expand the eigenvalue condition of `system` through delta^order.

    symmetric, odd:  coefficient of Ai'(-x)^2 in G (Ai(-x) = 0)
    symmetric, even: coefficient of Ai(-x)^2 in G (Ai'(-x) = 0)
    bouncer:         coefficient of Ai'(-x) in Ai(-E / (e0 (1 + delta)^(2/3)))
    """
    _check_order(order)
    if system not in ("bouncer", "symmetric"):
        raise InvalidParameterError(f"unknown system '{system}'")
    if system == "symmetric" and parity not in ("even", "odd"):
        raise InvalidParameterError("symmetric expansion needs parity 'even' or 'odd'")

    unknowns = _unknowns(order)
    scale: Series = [sp.Integer(1), *unknowns]

    def shift(sign: int) -> Series:
        stretched = _mul(scale, binomial_series(sp.Rational(-2, 3), order, sign), order)
        return [sp.Integer(0)] + [sp.expand(-X * c) for c in stretched[1:]]

    shifts = {+1: shift(+1), -1: shift(-1)}
    ai_terms = [t.at(-X) for t in taylor_shift("ai", order)]
    aip_terms = [t.at(-X) for t in taylor_shift("ai_prime", order)]
    # component 0 multiplies Ai(-x), component 1 multiplies Ai'(-x)
    keep = 1 if (system == "bouncer" or parity == "odd") else 0
    value = {s: _compose([t[keep] for t in ai_terms], shifts[s], order) for s in (+1, -1)}

    if system == "bouncer":
        coefficients = value[+1]
        factor = "Ai'(-x)"
    else:
        slope = {s: _compose([t[keep] for t in aip_terms], shifts[s], order) for s in (+1, -1)}
        plus_third = binomial_series(sp.Rational(1, 3), order)
        minus_third = binomial_series(sp.Rational(1, 3), order, -1)
        first = _mul(plus_third, _mul(value[-1], slope[+1], order), order)
        second = _mul(minus_third, _mul(value[+1], slope[-1], order), order)
        coefficients = _add(first, second)
        factor = "Ai'(-x)^2" if parity == "odd" else "Ai(-x)^2"

    logger.debug("expanded %s/%s condition to order %d", system, parity, order)
    return ConditionSeries(
        system=system,
        parity=parity if system == "symmetric" else None,
        order=order,
        coefficients=tuple(coefficients),
        unknowns=unknowns,
        factor=factor,
    )


def expand_G(parity: Parity, order: int) -> ConditionSeries:
    """Delta-expansion of the symmetric-well condition G(E, delta)."""
    return expand_condition("symmetric", parity, order)


@dataclass(frozen=True)
class DeltaSeries:
    """E = x e0 (1 + sum_k R_k delta^k) with exact R_k (constants or functions of x)."""

    system: str
    parity: Optional[Parity]
    coefficients: Tuple[sp.Expr, ...] = field(default_factory=tuple)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def coefficient(self, k: int) -> sp.Expr:
        return self.coefficients[k - 1]

    def as_strings(self) -> Dict[str, str]:
        """{"R1": "0", "R2": "-7/9", ...}; rationals print as p/q."""
        return {f"R{k}": str(c) for k, c in enumerate(self.coefficients, start=1)}

    def is_constant(self) -> bool:
        return all(X not in c.free_symbols for c in self.coefficients)

    def evaluate(self, x: float, delta: float) -> float:
        """Truncated energy ratio E / (x e0) at field strength delta."""
        total = 1.0
        for k, c in enumerate(self.coefficients, start=1):
            total += float(c.subs(X, x)) * delta ** k
        return total


@lru_cache(maxsize=None)
def solve_series(system: str, parity: Optional[Parity], order: int) -> DeltaSeries:
    """
    Solve the expanded condition for R_1..R_order.

    R_k enters the delta^k coefficient linearly and no higher R_j appears
    there, so the equations are solved in sequence with earlier values
    substituted.

    Raises:
        ExpansionError: a coefficient is not linear in its R_k, contains a
            later unknown, or does not vanish at delta^0
    """
    if order < 1:
        raise InvalidParameterError(f"order must be >= 1, got {order}")
    series = expand_condition(system, parity, order)
    if sp.simplify(series.coefficients[0]) != 0:
        raise ExpansionError(f"delta^0 term does not vanish: {series.coefficients[0]}")

    known: Dict[sp.Symbol, sp.Expr] = {}
    solved = []
    for k, unknown in enumerate(series.unknowns, start=1):
        coefficient = sp.expand(series.coefficients[k].subs(known))
        later = set(series.unknowns[k:]) & coefficient.free_symbols
        if later:
            raise ExpansionError(f"delta^{k} coefficient contains later unknowns {sorted(map(str, later))}")
        slope = sp.expand(sp.diff(coefficient, unknown))
        if slope == 0:
            raise ExpansionError(f"delta^{k} coefficient does not depend on {unknown}")
        if unknown in slope.free_symbols:
            raise ExpansionError(f"delta^{k} coefficient is not linear in {unknown}")
        rest = sp.expand(coefficient - slope * unknown)
        value = sp.cancel(-rest / slope)
        known[unknown] = value
        solved.append(value)
    logger.info("solved %s/%s expansion through order %d", system, parity, order)
    return DeltaSeries(system=system, parity=parity if system == "symmetric" else None,
                       coefficients=tuple(solved))


def solve_R(parity: Parity, order: int) -> DeltaSeries:
    """R_1..R_order for the symmetric well."""
    return solve_series("symmetric", parity, order)


def second_order_coefficient(parity: Parity) -> sp.Rational:
    """R_2 for the given parity (-7/9 odd, -5/9 even)."""
    return solve_R(parity, 2).coefficient(2)
