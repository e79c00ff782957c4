"""
Rayleigh-Schroedinger sums over Airy-zero spectra.

Every sum is dimensionless: energies in e0, lengths in rho, field in
delta = fbar / F. The second-order families equate a perturbation sum with
the exact second-order coefficient, giving closed-form sum rules:

    bouncer       sum_{k != n} (zeta_k - zeta_n)^-5         = zeta_n / 36
    symlin_odd    sum_k 1 / (chi_k (chi_k - zeta_n)^7)      = 7 zeta_n / 36
    symlin_even   (1/chi_n) sum_k (zeta_k - chi_n)^-7       = 5 chi_n / 36
"""

import logging
import math
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from linstark.airy_core import chi_array, zero_seed, zeta_array
from linstark.config import get_settings
from linstark.errors import InvalidParameterError
from linstark.models import Parity, PhysicalScales, SumFamily, SumRuleResult, ThirdOrderResult
from linstark.oracle import quadrature

logger = logging.getLogger(__name__)

FAMILY_ALIASES: Dict[str, SumFamily] = {
    "bouncer": "bouncer",
    "bouncer5": "bouncer",
    "symlin_odd": "symlin_odd",
    "odd7": "symlin_odd",
    "symlin_even": "symlin_even",
    "even7": "symlin_even",
}

_SYSTEM_ALIASES = {"bouncer": "bouncer", "symmetric": "symmetric", "symlin": "symmetric"}

_BLOCK_ROWS = 256


def resolve_family(name: str) -> SumFamily:
    try:
        return FAMILY_ALIASES[name.lower()]
    except KeyError:
        raise InvalidParameterError(
            f"unknown sum family '{name}'; expected one of {sorted(FAMILY_ALIASES)}"
        ) from None


def _family_setup(family: SumFamily, n: int, k_max: int) -> Tuple[np.ndarray, float, float, Callable]:
    """Terms k = 1..k_max, the unperturbed eigenvalue, the target and the tail integrand."""
    zeta = zeta_array(max(k_max, n))
    chi = chi_array(max(k_max, n))
    if family == "bouncer":
        x = zeta[n - 1]
        with np.errstate(divide="ignore"):
            terms = (zeta[:k_max] - x) ** -5.0
        terms[n - 1] = 0.0

        def tail(k):
            return (zero_seed("ai", k) - x) ** -5.0

        return terms, x, x / 36.0, tail
    if family == "symlin_odd":
        x = zeta[n - 1]
        terms = 1.0 / (chi[:k_max] * (chi[:k_max] - x) ** 7)

        def tail(k):
            c = zero_seed("ai_prime", k)
            return 1.0 / (c * (c - x) ** 7)

        return terms, x, 7.0 * x / 36.0, tail
    x = chi[n - 1]
    terms = (zeta[:k_max] - x) ** -7.0 / x

    def tail(k):
        return (zero_seed("ai", k) - x) ** -7.0 / x

    return terms, x, 5.0 * x / 36.0, tail


def tail_integral(func: Callable[[np.ndarray], np.ndarray], start: float) -> float:
    """
    Integral of func(k) over [start, inf), through k = start / s on s in (0, 1].
    """
    def mapped(s):
        return func(start / s) * start / (s * s)

    scale = abs(float(func(np.array([start]))[0])) * start
    return quadrature(mapped, 0.0, 1.0, tol=max(scale * 1e-13, 1e-300), rtol=1e-12)


def _truncated_total(family: SumFamily, n: int, k_max: int) -> Tuple[float, float, float, float]:
    terms, x, target, tail = _family_setup(family, n, k_max)
    partial = math.fsum(terms.tolist())
    tail_estimate = tail_integral(tail, k_max + 0.5)
    return partial, tail_estimate, target, x


def second_order_sum(family: str, n: int, k_max: Optional[int] = None) -> SumRuleResult:
    """
    Tail-corrected second-order sum for one level and its closed-form target.

    Terms are accumulated in ascending k with compensated summation. The
    remainder beyond k_max is the integral of the same summand with the
    handbook asymptotic zeros, started half a step past the last term.
    The result is flagged (not rejected) when halving k_max moves the total
    by more than the configured tolerance.

    Raises:
        InvalidParameterError: n < 1, k_max < 10 n, or unknown family
    """
    family = resolve_family(family)
    settings = get_settings()
    k_max = k_max or settings.kmax
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if k_max < 10 * n:
        raise InvalidParameterError(f"k_max = {k_max} is below 10 n = {10 * n}")

    partial, tail_estimate, target, _ = _truncated_total(family, n, k_max)
    total = partial + tail_estimate

    stable = True
    half = k_max // 2
    if half >= 10 * n:
        half_partial, half_tail, _, _ = _truncated_total(family, n, half)
        drift = abs(total - (half_partial + half_tail))
        stable = drift <= settings.tol * abs(target)
        if not stable:
            logger.warning(
                "%s sum for n=%d moved by %.3e between k_max=%d and %d; tail not settled",
                family, n, drift, half, k_max,
            )

    return SumRuleResult(
        system=family,
        n=n,
        partial_sum=partial,
        k_max=k_max,
        tail_estimate=tail_estimate,
        target=target,
        relative_error=abs(total - target) / abs(target),
        tail_stable=stable,
    )


def second_order_energy(
    family: str,
    n: int,
    delta: float,
    scales: Optional[PhysicalScales] = None,
    k_max: Optional[int] = None,
) -> float:
    """Second-order shift -4 delta^2 e0 S, with S the tail-corrected family sum."""
    scales = scales or PhysicalScales.dimensionless()
    result = second_order_sum(family, n, k_max)
    return -4.0 * delta ** 2 * scales.e0 * (result.partial_sum + result.tail_estimate)


# ---------------------------------------------------------------------------
# Dipole matrices and third order


def _tower(system: str, k_max: int) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Dimensionless energies of the first k_max levels (per parity) and the odd mask."""
    if system == "bouncer":
        return zeta_array(k_max), None
    energies = np.empty(2 * k_max)
    energies[0::2] = chi_array(k_max)
    energies[1::2] = zeta_array(k_max)
    odd = np.zeros(2 * k_max, dtype=bool)
    odd[1::2] = True
    return energies, odd


def _dipole_rows(energies: np.ndarray, odd: Optional[np.ndarray], rows: slice) -> np.ndarray:
    e_rows = energies[rows]
    gap = e_rows[:, None] - energies[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        if odd is None:
            block = -2.0 / gap ** 2
            diagonal = 2.0 * e_rows / 3.0
        else:
            # even index carries chi, odd index carries zeta
            chi = np.where(odd[None, :], e_rows[:, None], energies[None, :])
            zeta = np.where(odd[None, :], energies[None, :], e_rows[:, None])
            block = -2.0 / (np.sqrt(chi) * (chi - zeta) ** 3)
            block = np.where(odd[rows][:, None] == odd[None, :], 0.0, block)
            diagonal = np.zeros_like(e_rows)
    index = np.arange(rows.start, rows.stop)
    block[index - rows.start, index] = diagonal
    return block


def dipole_matrix(system: str, k_max: int) -> np.ndarray:
    """
    Dimensionless <j|z|k> over the first k_max levels.

    For the symmetric well the basis is the interleaved tower
    chi_1, zeta_1, chi_2, zeta_2, ... (2 k_max states).
    """
    system = _normalise_system(system)
    energies, odd = _tower(system, k_max)
    size = len(energies)
    blocks = [
        _dipole_rows(energies, odd, slice(start, min(start + _BLOCK_ROWS, size)))
        for start in range(0, size, _BLOCK_ROWS)
    ]
    return np.vstack(blocks)


def _normalise_system(system: str) -> str:
    try:
        return _SYSTEM_ALIASES[system.lower()]
    except KeyError:
        raise InvalidParameterError(f"unknown system '{system}'") from None


def _third_order_estimate(system: str, position: int, k_max: int) -> float:
    energies, odd = _tower(system, k_max)
    size = len(energies)
    with np.errstate(divide="ignore", invalid="ignore"):
        coupling = _dipole_rows(energies, odd, slice(position, position + 1))[0]
        weights = coupling / (energies[position] - energies)
    weights[position] = 0.0
    first = 0.0
    for start in range(0, size, _BLOCK_ROWS):
        rows = slice(start, min(start + _BLOCK_ROWS, size))
        first += float(weights[rows] @ (_dipole_rows(energies, odd, rows) @ weights))
    return first - coupling[position] * float(weights @ weights)


def third_order_check(
    system: str,
    n: int,
    k_max: Optional[int] = None,
    parity: Parity = "odd",
) -> ThirdOrderResult:
    """
    Third-order Rayleigh-Schroedinger double sum in units of delta^3 e0.

    The bouncer value approaches (4/81) zeta_n. In the symmetric well every
    intermediate pair has equal parity, so the sum vanishes identically.
    `tail_bound` is the change in the estimate between k_max / 2 and k_max.
    """
    system = _normalise_system(system)
    k_max = k_max or get_settings().kmax
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if k_max < 10 * n:
        raise InvalidParameterError(f"k_max = {k_max} is below 10 n = {10 * n}")

    if system == "bouncer":
        position = n - 1
        target = 4.0 * float(zeta_array(n)[-1]) / 81.0
        parity = None
    else:
        position = 2 * (n - 1) + (1 if parity == "odd" else 0)
        target = 0.0

    estimate = _third_order_estimate(system, position, k_max)
    coarse = _third_order_estimate(system, position, k_max // 2)
    tail_bound = abs(estimate - coarse)
    logger.debug("third order %s n=%d: %.12g (bound %.2e)", system, n, estimate, tail_bound)
    return ThirdOrderResult(
        system=system,
        parity=parity,
        n=n,
        estimate=estimate,
        k_max=k_max,
        tail_bound=tail_bound,
        target=target,
    )


# ---------------------------------------------------------------------------
# Reference systems


def reference_shift(
    kind: str,
    fbar: float,
    mass: float = 0.5,
    hbar: float = 1.0,
    omega: Optional[float] = None,
    half_width: Optional[float] = None,
    n: int = 0,
) -> float:
    """
    Closed-form second-order Stark shifts of two textbook systems.

    harmonic: -fbar^2 / (2 m omega^2), the same for every level.
    infinite_well (walls at +-half_width, n = 0, 1, ...):
        fbar^2 a^2 / (12 E_n) [1 - 15 / ((n+1)^2 pi^2)],
        E_n = hbar^2 pi^2 (n+1)^2 / (8 m a^2).
    """
    if mass <= 0 or hbar <= 0:
        raise InvalidParameterError("mass and hbar must be positive")
    if kind == "harmonic":
        if omega is None or omega <= 0:
            raise InvalidParameterError("harmonic reference needs omega > 0")
        return -fbar ** 2 / (2.0 * mass * omega ** 2)
    if kind == "infinite_well":
        if half_width is None or half_width <= 0:
            raise InvalidParameterError("infinite_well reference needs half_width > 0")
        if n < 0:
            raise InvalidParameterError(f"n must be >= 0, got {n}")
        unperturbed = hbar ** 2 * math.pi ** 2 * (n + 1) ** 2 / (8.0 * mass * half_width ** 2)
        bracket = 1.0 - 15.0 / ((n + 1) ** 2 * math.pi ** 2)
        return fbar ** 2 * half_width ** 2 / (12.0 * unperturbed) * bracket
    raise InvalidParameterError(f"unknown reference system '{kind}'")
