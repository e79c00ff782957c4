"""
Airy functions, their zeros, and closed-form Airy integrals.

Evaluation uses two branches:

* |x| <= X_SWITCH: Taylor series about anchor points spaced ANCHOR_STEP
  apart. The coefficients follow from Ai'' = x Ai alone,
  (k+2)(k+1) c[k+2] = x0 c[k] + c[k-1]. The anchor at 0 is the Maclaurin
  series seeded with Ai(0), Ai'(0), Bi(0), Bi'(0). The other anchors are
  reached by stepping in the numerically stable direction: Bi (and both
  functions for x < 0) outward from 0, Ai for x > 0 inward from the
  asymptotic value at X_SWITCH.
* |x| > X_SWITCH: the standard asymptotic expansions, summed up to the
  smallest term. At X_SWITCH = 9 the phase variable is 18 and the smallest
  term is below 1e-14, so the two branches agree to better than 1e-12
  across the window [8.5, 9.5] (and its mirror image).
"""

import logging
import math
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from linstark.config import get_settings
from linstark.errors import (
    IllConditionedError,
    InvalidParameterError,
    UnsupportedIdentityError,
    ZeroFindingError,
)
from linstark.models import AiryPair, ZeroKind, ZeroTable
from linstark.roots import newton_bisect

logger = logging.getLogger(__name__)

X_SWITCH = 9.0
ANCHOR_STEP = 0.25
TAYLOR_TERMS = 32
ASYMPTOTIC_TERMS = 64
CROSS_SHIFT_MIN_GAP = 1e-6

AI0 = 0.35502805388781723926
AIP0 = -0.25881940379280679840
BI0 = 0.61492662744600073515
BIP0 = 0.44828835735382635791

_SQRT_PI = math.sqrt(math.pi)

ArrayQuad = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


def _asymptotic_coefficients(count: int) -> Tuple[np.ndarray, np.ndarray]:
    u = [1.0]
    v = [1.0]
    for k in range(1, count):
        u_k = u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        u.append(u_k)
        v.append(-(6 * k + 1) / (6 * k - 1) * u_k)
    return np.array(u), np.array(v)


_U, _V = _asymptotic_coefficients(ASYMPTOTIC_TERMS)


def _taylor_step(x0, y0, yp0, h):
    """Advance a solution of y'' = x y from x0 to x0 + h."""
    c_prev = np.zeros_like(y0)
    c_k = y0
    c_next = yp0
    value = c_k.copy()
    deriv = np.zeros_like(y0)
    h_power = np.ones_like(h)
    for k in range(1, TAYLOR_TERMS):
        # c_next is the coefficient of h^k
        deriv = deriv + k * c_next * h_power
        h_power = h_power * h
        value = value + c_next * h_power
        c_after = (x0 * c_k + c_prev) / ((k + 1) * k)
        c_prev, c_k, c_next = c_k, c_next, c_after
    return value, deriv


def asymptotic_branch(x) -> ArrayQuad:
    """
    Large-|x| expansions of Ai, Ai', Bi, Bi'.

    Accurate for |x| >= 8.5; meaningless near 0.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.abs(x)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        zeta = (2.0 / 3.0) * t ** 1.5
        inv = 1.0 / zeta
        sums = {name: np.zeros_like(t) for name in ("u", "v", "u_alt", "v_alt", "p", "q", "r", "s")}
        power = np.ones_like(t)
        previous = np.full_like(t, np.inf)
        active = np.ones(t.shape, dtype=bool)
        for k in range(ASYMPTOTIC_TERMS):
            magnitude = _U[k] * power
            active &= magnitude < previous
            u_term = np.where(active, _U[k] * power, 0.0)
            v_term = np.where(active, _V[k] * power, 0.0)
            sign = -1.0 if k % 2 else 1.0
            sums["u"] += u_term
            sums["v"] += v_term
            sums["u_alt"] += sign * u_term
            sums["v_alt"] += sign * v_term
            pair_sign = -1.0 if (k // 2) % 2 else 1.0
            if k % 2 == 0:
                sums["p"] += pair_sign * u_term
                sums["r"] += pair_sign * v_term
            else:
                sums["q"] += pair_sign * u_term
                sums["s"] += pair_sign * v_term
            active &= magnitude > 1e-18
            previous = magnitude
            power = power * inv

        quarter = t ** 0.25
        decay = np.exp(-zeta)
        growth = np.exp(zeta)
        theta = zeta + math.pi / 4.0
        sin_t, cos_t = np.sin(theta), np.cos(theta)

        positive = x > 0
        ai = np.where(
            positive,
            decay / (2.0 * _SQRT_PI * quarter) * sums["u_alt"],
            (sin_t * sums["p"] - cos_t * sums["q"]) / (_SQRT_PI * quarter),
        )
        aip = np.where(
            positive,
            -quarter * decay / (2.0 * _SQRT_PI) * sums["v_alt"],
            -quarter * (cos_t * sums["r"] + sin_t * sums["s"]) / _SQRT_PI,
        )
        bi = np.where(
            positive,
            growth / (_SQRT_PI * quarter) * sums["u"],
            (cos_t * sums["p"] + sin_t * sums["q"]) / (_SQRT_PI * quarter),
        )
        bip = np.where(
            positive,
            quarter * growth / _SQRT_PI * sums["v"],
            quarter * (sin_t * sums["r"] - cos_t * sums["s"]) / _SQRT_PI,
        )
    return ai, aip, bi, bip


@lru_cache(maxsize=1)
def _anchors() -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    steps = int(round(X_SWITCH / ANCHOR_STEP))
    xs = ANCHOR_STEP * np.arange(-steps, steps + 1, dtype=float)
    centre = steps
    ai = np.empty_like(xs)
    aip = np.empty_like(xs)
    bi = np.empty_like(xs)
    bip = np.empty_like(xs)
    ai[centre], aip[centre], bi[centre], bip[centre] = AI0, AIP0, BI0, BIP0

    def step(i_from, i_to, y, yp):
        h = np.array([xs[i_to] - xs[i_from]])
        value, deriv = _taylor_step(np.array([xs[i_from]]), np.array([y[i_from]]), np.array([yp[i_from]]), h)
        y[i_to], yp[i_to] = value[0], deriv[0]

    for i in range(centre, 0, -1):
        step(i, i - 1, ai, aip)
        step(i, i - 1, bi, bip)
    for i in range(centre, len(xs) - 1):
        step(i, i + 1, bi, bip)

    top_ai, top_aip, _, _ = asymptotic_branch(xs[-1])
    ai[-1], aip[-1] = top_ai[0], top_aip[0]
    for i in range(len(xs) - 1, centre + 1, -1):
        step(i, i - 1, ai, aip)
    logger.debug("built %d Airy anchors on [%g, %g]", len(xs), xs[0], xs[-1])
    return xs, ai, aip, bi, bip


def series_branch(x) -> ArrayQuad:
    """Taylor series about the nearest anchor; valid for |x| <= X_SWITCH + 0.5."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xs, ai, aip, bi, bip = _anchors()
    index = np.clip(np.rint((x - xs[0]) / ANCHOR_STEP).astype(int), 0, len(xs) - 1)
    x0 = xs[index]
    h = x - x0
    ai_x, aip_x = _taylor_step(x0, ai[index], aip[index], h)
    bi_x, bip_x = _taylor_step(x0, bi[index], bip[index], h)
    return ai_x, aip_x, bi_x, bip_x


def airy(x) -> ArrayQuad:
    """
    Vectorised Ai, Ai', Bi, Bi'.

    Args:
        x: real scalar or array

    Returns:
        Four arrays with the shape of np.atleast_1d(x).

    Raises:
        InvalidParameterError: if any argument is not finite
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(x)):
        raise InvalidParameterError("Airy functions need finite arguments")
    inner = np.abs(x) <= X_SWITCH
    out = [np.empty_like(x) for _ in range(4)]
    if np.any(inner):
        for target, values in zip(out, series_branch(x[inner])):
            target[inner] = values
    if np.any(~inner):
        for target, values in zip(out, asymptotic_branch(x[~inner])):
            target[~inner] = values
    return out[0], out[1], out[2], out[3]


def airy_eval(x: float) -> AiryPair:
    """Ai, Ai', Bi, Bi' at a single point."""
    if not math.isfinite(x):
        raise InvalidParameterError(f"Airy functions need a finite argument, got {x}")
    ai, aip, bi, bip = airy(x)
    return AiryPair(x=x, ai=float(ai[0]), aip=float(aip[0]), bi=float(bi[0]), bip=float(bip[0]))


def ai_and_derivative(x) -> Tuple[np.ndarray, np.ndarray]:
    ai, aip, _, _ = airy(x)
    return ai, aip


def branch_mismatch(lo: float, hi: float, samples: int = 41) -> float:
    """
    Largest disagreement between the two branches on [lo, hi].

    Differences are scaled by the local modulus sqrt(Ai^2 + Bi^2) (and its
    derivative counterpart) on the oscillatory side and by the function
    values themselves on the monotone side.
    """
    x = np.linspace(lo, hi, samples)
    series = series_branch(x)
    asymptotic = asymptotic_branch(x)
    worst = 0.0
    for index, (s, a) in enumerate(zip(series, asymptotic)):
        if np.all(x > 0):
            scale = np.abs(a)
        else:
            partner = asymptotic[(index + 2) % 4]
            scale = np.hypot(a, partner)
        worst = max(worst, float(np.max(np.abs(s - a) / scale)))
    return worst


# ---------------------------------------------------------------------------
# Zeros


def zero_seed(kind: ZeroKind, n):
    """Handbook leading-order asymptotic for the n-th zero magnitude."""
    offset = 0.25 if kind == "ai" else 0.75
    n = np.asarray(n, dtype=float)
    return (1.5 * math.pi * (n - offset)) ** (2.0 / 3.0)


def _zero_function(kind: ZeroKind):
    if kind == "ai":
        def func(t):
            ai, aip = ai_and_derivative(-t)
            return ai, -aip
    else:
        def func(t):
            ai, aip = ai_and_derivative(-t)
            return aip, t * ai
    return func


def _refine_zeros(kind: ZeroKind, n: np.ndarray, residual_tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Roots for the indices `n` together with the residual bound each one meets.

    The bound is residual_tol unless rounding of the root itself dominates:
    near a zero the residual cannot fall below eps * |slope| * (root + phase),
    which passes 1e-12 for Ai' beyond a few hundred zeros.
    """
    if kind not in ("ai", "ai_prime"):
        raise InvalidParameterError(f"unknown zero kind '{kind}'")
    if np.any(n < 1):
        raise InvalidParameterError("zero index must be >= 1")
    seed = zero_seed(kind, n)
    lower = np.where(n > 1, 0.5 * (zero_seed(kind, np.maximum(n - 1, 1)) + seed), 0.0)
    upper = 0.5 * (seed + zero_seed(kind, n + 1))
    func = _zero_function(kind)
    roots = newton_bisect(func, lower, upper, guess=seed)

    value, slope = func(roots)
    phase = (2.0 / 3.0) * roots ** 1.5
    bound = np.maximum(residual_tol, 16.0 * np.finfo(float).eps * np.abs(slope) * (roots + phase))
    bad = np.abs(value) >= bound
    if np.any(bad):
        first = int(n[bad][0])
        raise ZeroFindingError(f"{kind} zero {first} has residual {float(np.abs(value[bad][0])):.3e}")
    return roots, bound


def find_zero(kind: ZeroKind, n: int) -> float:
    """
    Magnitude of the n-th zero of Ai (kind='ai') or Ai' (kind='ai_prime').

    Seeds from the handbook asymptotic, brackets between the midpoints of
    adjacent seeds, then refines by safeguarded Newton.
    """
    if n < 1:
        raise InvalidParameterError(f"zero index must be >= 1, got {n}")
    tol = get_settings().zero_residual_tol
    return float(_refine_zeros(kind, np.array([n]), tol)[0][0])


# tol -> (zeta, chi, per-entry residual bound)
_table_cache: Dict[float, Tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def zero_table(count: int) -> ZeroTable:
    """
    First `count` zeros of Ai and Ai'. Tables are computed once and sliced.

    `residual_tol` of the result is the largest residual bound among the
    returned entries: the configured tolerance for the low zeros, the
    rounding limit of the root where that is larger.
    """
    if count < 1:
        raise InvalidParameterError("zero table needs at least one entry")
    tol = get_settings().zero_residual_tol
    cached = _table_cache.get(tol)
    if cached is None or len(cached[0]) < count:
        n = np.arange(1, count + 1)
        zeta, zeta_bound = _refine_zeros("ai", n, tol)
        chi, chi_bound = _refine_zeros("ai_prime", n, tol)
        cached = (zeta, chi, np.maximum(zeta_bound, chi_bound))
        _table_cache[tol] = cached
        logger.info("computed zero table with %d entries", count)
    zeta, chi, bound = cached
    return ZeroTable(
        zeta=zeta[:count].tolist(),
        chi=chi[:count].tolist(),
        residual_tol=float(np.max(bound[:count])),
    )


def zeta_array(count: int) -> np.ndarray:
    return np.array(zero_table(count).zeta)


def chi_array(count: int) -> np.ndarray:
    return np.array(zero_table(count).chi)


# ---------------------------------------------------------------------------
# closed-form integral identities (A = B = Ai)


def antideriv_product(x, beta1: float, beta2: float, moment: int):
    """
    Antiderivative of x^moment Ai(x - beta1) Ai(x - beta2).

    Same shift (beta1 == beta2) supports moments 0, 1, 2. Different shifts
    support moments 0 and 1; the moment-1 form carries a +2/(b1-b2)^2 A'B'
    term, which is the sign that differentiates back to the integrand.

    Raises:
        InvalidParameterError: moment outside {0, 1, 2}
        UnsupportedIdentityError: moment 2 with different shifts
        IllConditionedError: 0 < |beta1 - beta2| < 1e-6
    """
    if moment not in (0, 1, 2):
        raise InvalidParameterError(f"moment must be 0, 1 or 2, got {moment}")
    x = np.asarray(x, dtype=float)
    if beta1 == beta2:
        return _same_shift(x, beta1, moment)
    if moment == 2:
        raise UnsupportedIdentityError("no x^2 identity for different shifts")
    if abs(beta1 - beta2) < CROSS_SHIFT_MIN_GAP:
        raise IllConditionedError(
            f"shifts differ by {abs(beta1 - beta2):.2e}; use the same-shift identity"
        )
    return _cross_shift(x, beta1, beta2, moment)


# The *_form functions take the Airy values as arguments and use plain
# arithmetic only, so they accept numpy arrays as well as sympy symbols.


def same_shift_form(x, beta, a, ap, moment: int):
    """Antiderivative of x^moment A^2 in terms of A = Ai(x - beta) and A'."""
    u = x - beta
    prod = a * a
    mixed = 2 * a * ap
    deriv = ap * ap
    if moment == 0:
        return u * prod - deriv
    if moment == 1:
        return u * (x + 2 * beta) * prod / 3 + mixed / 6 - (x + 2 * beta) * deriv / 3
    return (
        (3 * x ** 3 + beta * x ** 2 + 4 * beta ** 2 * x - 8 * beta ** 3 - 3) * prod
        + (3 * x + 2 * beta) * mixed
        - (3 * x ** 2 + 4 * beta * x + 8 * beta ** 2) * deriv
    ) / 15


def cross_shift_form(x, beta1, beta2, a, ap, b, bp, moment: int):
    """Antiderivative of x^moment A B with A = Ai(x - beta1), B = Ai(x - beta2)."""
    gap = beta2 - beta1
    wronskian_like = ap * b - a * bp
    if moment == 0:
        return wronskian_like / gap
    return (
        (beta1 + beta2 - 2 * x) / gap ** 2 * a * b
        + (x / gap + 2 / gap ** 3) * wronskian_like
        + 2 / gap ** 2 * ap * bp
    )


def derivative_product_form(x, beta, a, ap):
    """Antiderivative of A'^2 with A = Ai(x - beta)."""
    u = x - beta
    return (2 * a * ap + u * ap * ap - u * u * a * a) / 3


def _scalar_or_array(value):
    return value if value.ndim else float(value)


def _same_shift(x, beta, moment):
    a, ap = ai_and_derivative(x - beta)
    return _scalar_or_array(same_shift_form(x, beta, a, ap, moment).reshape(np.shape(x)))


def _cross_shift(x, beta1, beta2, moment):
    a, ap = ai_and_derivative(x - beta1)
    b, bp = ai_and_derivative(x - beta2)
    value = cross_shift_form(x, beta1, beta2, a, ap, b, bp, moment)
    return _scalar_or_array(value.reshape(np.shape(x)))


def antideriv_derivative_product(x, beta: float):
    """Antiderivative of Ai'(x - beta)^2."""
    x = np.asarray(x, dtype=float)
    a, ap = ai_and_derivative(x - beta)
    return _scalar_or_array(derivative_product_form(x, beta, a, ap).reshape(np.shape(x)))


def definite_product_integral(beta1: float, beta2: float, moment: int,
                              lower: float = 0.0, upper: float = math.inf) -> float:
    """Integral of x^moment Ai(x-beta1) Ai(x-beta2) over [lower, upper]; F(+inf) = 0."""
    top = 0.0 if math.isinf(upper) else antideriv_product(upper, beta1, beta2, moment)
    return float(top - antideriv_product(lower, beta1, beta2, moment))


def definite_derivative_integral(beta: float, lower: float = 0.0, upper: float = math.inf) -> float:
    top = 0.0 if math.isinf(upper) else antideriv_derivative_product(upper, beta)
    return float(top - antideriv_derivative_product(lower, beta))


def symmetric_product_integral(beta1: float, beta2: float, moment: int, parity_sign: int = 1) -> float:
    """
    Integral over the whole line of z^moment f(z) g(z), with f, g built
    from Ai(|z| - beta).

    `parity_sign` is +1 when f g is even in z and -1 when it is odd (one
    odd, one even wavefunction). The range is split at 0 and folded.
    """
    half = definite_product_integral(beta1, beta2, moment)
    fold = parity_sign * (-1) ** moment
    return (1 + fold) * half
