"""
The symmetric linear potential V(z) = F |z|.

Even states satisfy Ai'(-chi_n) = 0 and odd states Ai(-zeta_n) = 0; the
two towers interleave as chi_1 < zeta_1 < chi_2 < ... An added force fbar
tilts the well into slopes F_R = F (1 + delta) for z > 0 and
F_L = F (1 - delta) for z < 0, and the energies become roots of G(E, delta).
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from linstark.airy_core import ai_and_derivative, chi_array, find_zero, zeta_array
from linstark.config import get_settings
from linstark.errors import InvalidParameterError, NoBoundStateError
from linstark.models import Expectations, Parity, PerturbedState, PhysicalScales, StarkInput, SymLevel
from linstark.roots import newton_bisect
from linstark.stark_expansion import second_order_coefficient
from linstark.systems.base import BaseLinearSystem, LevelLabel

logger = logging.getLogger(__name__)

BRACKET_PAD = 0.4
# Below this |Ai(-y_R)| the continuity ratio is taken from the slopes instead.
_SMALL_VALUE = 1e-8


def _scales(scales: Optional[PhysicalScales]) -> PhysicalScales:
    return scales or PhysicalScales.dimensionless()


def _require_parity(parity: str) -> None:
    if parity not in ("even", "odd"):
        raise InvalidParameterError(f"parity must be 'even' or 'odd', got '{parity}'")


def _require_index(n: int, label: str = "n") -> None:
    if n < 1:
        raise InvalidParameterError(f"{label} must be >= 1, got {n}")


def _require_bound(delta: float) -> None:
    if not abs(delta) < 1.0:
        raise NoBoundStateError(f"|delta| = {abs(delta)} >= 1: the potential is unbounded below on one side")


def _eigenvalue(parity: Parity, n: int) -> float:
    return find_zero("ai_prime" if parity == "even" else "ai", n)


def level(parity: Parity, n: int, scales: Optional[PhysicalScales] = None) -> SymLevel:
    _require_parity(parity)
    _require_index(n)
    x = _eigenvalue(parity, n)
    return SymLevel(parity=parity, n=n, dimensionless_energy=x, energy=x * _scales(scales).e0)


def wavefunction(parity: Parity, n: int, scales: Optional[PhysicalScales], z):
    """
    Normalised eigenfunction on the whole line.

    odd:  sgn(z) Ai(|z|/rho - zeta_n) / (sqrt(2 rho) Ai'(-zeta_n))
    even: Ai(|z|/rho - chi_n) / (sqrt(2 rho chi_n) Ai(-chi_n))
    """
    _require_parity(parity)
    _require_index(n)
    scales = _scales(scales)
    z_arr = np.asarray(z, dtype=float)
    x = _eigenvalue(parity, n)
    ai_at_0, aip_at_0 = ai_and_derivative(-x)
    ai, _ = ai_and_derivative(np.abs(z_arr) / scales.rho - x)
    ai = ai.reshape(z_arr.shape)
    if parity == "odd":
        psi = np.sign(z_arr) * ai / (math.sqrt(2.0 * scales.rho) * aip_at_0[0])
    else:
        psi = ai / (math.sqrt(2.0 * scales.rho * x) * ai_at_0[0])
    return float(psi) if psi.ndim == 0 else psi


def expectations(parity: Parity, n: int, scales: Optional[PhysicalScales] = None) -> Expectations:
    """Virial split of E, <z> = 0 by parity and <|z|> = <V> / F."""
    scales = _scales(scales)
    energy = level(parity, n, scales).energy
    return Expectations(
        mean_V=2.0 * energy / 3.0,
        mean_T=energy / 3.0,
        mean_z=0.0,
        mean_abs_z=2.0 * energy / (3.0 * scales.slope),
    )


def dipole_cross(n_odd: int, k_even: int, scales: Optional[PhysicalScales] = None) -> float:
    """<odd n|z|even k> = -2 rho / (sqrt(chi_k) (chi_k - zeta_n)^3)."""
    _require_index(n_odd, "n_odd")
    _require_index(k_even, "k_even")
    zeta = find_zero("ai", n_odd)
    chi = find_zero("ai_prime", k_even)
    return -2.0 * _scales(scales).rho / (math.sqrt(chi) * (chi - zeta) ** 3)


def dipole(parity_a: Parity, n_a: int, parity_b: Parity, n_b: int,
           scales: Optional[PhysicalScales] = None) -> float:
    """Dipole element between any two states; zero unless the parities differ."""
    _require_parity(parity_a)
    _require_parity(parity_b)
    _require_index(n_a)
    _require_index(n_b)
    if parity_a == parity_b:
        return 0.0
    if parity_a == "odd":
        return dipole_cross(n_a, n_b, scales)
    return dipole_cross(n_b, n_a, scales)


# ---------------------------------------------------------------------------
# Perturbed eigenvalue condition


def _arguments(eps, delta: float):
    y_right = eps / (1.0 + delta) ** (2.0 / 3.0)
    y_left = eps / (1.0 - delta) ** (2.0 / 3.0)
    return y_left, y_right


def _condition(eps, delta: float):
    """G and dG/d(eps) in dimensionless units."""
    eps = np.asarray(eps, dtype=float)
    y_left, y_right = _arguments(eps, delta)
    s_left = (1.0 - delta) ** (-2.0 / 3.0)
    s_right = (1.0 + delta) ** (-2.0 / 3.0)
    w_right = (1.0 + delta) ** (1.0 / 3.0)
    w_left = (1.0 - delta) ** (1.0 / 3.0)
    a_l, ap_l = ai_and_derivative(-y_left)
    a_r, ap_r = ai_and_derivative(-y_right)
    value = w_right * a_l * ap_r + w_left * a_r * ap_l
    slope = (
        w_right * (-ap_l * s_left * ap_r + a_l * y_right * a_r * s_right)
        + w_left * (-ap_r * s_right * ap_l + a_r * y_left * a_l * s_left)
    )
    return value, slope


def eigencondition(energy: float, delta: float, scales: Optional[PhysicalScales] = None) -> float:
    """
    G(E, delta) = (1+d)^(1/3) Ai(-y_L) Ai'(-y_R) + (1-d)^(1/3) Ai(-y_R) Ai'(-y_L),
    with y_R = E / (e0 (1+d)^(2/3)) and y_L = E / (e0 (1-d)^(2/3)).
    """
    _require_bound(delta)
    value, _ = _condition(energy / _scales(scales).e0, delta)
    return float(value[0])


def _position(parity: Parity, n: int) -> int:
    """1-based index of the level in the interleaved tower chi_1, zeta_1, chi_2, ..."""
    return 2 * n - 1 if parity == "even" else 2 * n


def _predicted_tower(size: int, delta: float) -> np.ndarray:
    """Interleaved levels shifted to second order, with a leading 0."""
    count = (size + 1) // 2 + 1
    tower = np.empty(2 * count)
    tower[0::2] = chi_array(count) * (1.0 + float(second_order_coefficient("even")) * delta ** 2)
    tower[1::2] = zeta_array(count) * (1.0 + float(second_order_coefficient("odd")) * delta ** 2)
    return np.concatenate([[0.0], tower])


def _solve(labels: List[Tuple[Parity, int]], delta: float) -> np.ndarray:
    positions = np.array([_position(p, n) for p, n in labels])
    tower = _predicted_tower(int(positions.max()) + 1, delta)
    centre = tower[positions]
    lower = centre - BRACKET_PAD * (centre - tower[positions - 1])
    upper = centre + BRACKET_PAD * (tower[positions + 1] - centre)
    return newton_bisect(lambda eps: _condition(eps, delta), lower, upper, guess=centre)


def solve_perturbed(
    parity: Parity,
    n: int,
    delta: float,
    scales: Optional[PhysicalScales] = None,
    delta_limit: Optional[float] = None,
) -> PerturbedState:
    """
    Root of G(E, delta) for the level that is (parity, n) at delta = 0.

    The bracket is centred on the second-order prediction and reaches 40%
    of the way to each neighbouring level.

    Raises:
        InvalidParameterError: bad parity/index or |delta| above delta_limit
        NoBoundStateError: |delta| >= 1
        BracketError: no sign change in the bracket
    """
    _require_parity(parity)
    _require_index(n)
    _require_bound(delta)
    limit = delta_limit if delta_limit is not None else get_settings().delta_limit
    if abs(delta) > limit:
        raise InvalidParameterError(f"|delta| = {abs(delta)} exceeds the solver limit {limit}")
    scales = _scales(scales)

    eps = float(_solve([(parity, n)], delta)[0])
    value, _ = _condition(eps, delta)
    y_left, y_right = _arguments(eps, delta)
    (a_l,), (ap_l,) = ai_and_derivative(-y_left)
    (a_r,), (ap_r,) = ai_and_derivative(-y_right)
    rho_r = scales.rho * (1.0 + delta) ** (-1.0 / 3.0)
    rho_l = scales.rho * (1.0 - delta) ** (-1.0 / 3.0)
    if abs(a_r) > _SMALL_VALUE:
        ratio = a_l / a_r
    else:
        ratio = -(rho_r / rho_l) * ap_l / ap_r
    logger.debug("perturbed %s level %d at delta=%g: eps=%.15g", parity, n, delta, eps)
    return PerturbedState(
        parity=parity,
        n=n,
        energy=eps * scales.e0,
        delta=delta,
        f_r=scales.slope * (1.0 + delta),
        f_l=scales.slope * (1.0 - delta),
        rho_r=rho_r,
        rho_l=rho_l,
        alpha_ratio=ratio,
        residual=float(value[0]),
    )


def wkb_index(parity: Parity, n: int) -> int:
    """Semiclassical quantum number: even n -> 2n - 2, odd n -> 2n - 1."""
    _require_parity(parity)
    _require_index(n)
    return 2 * n - 2 if parity == "even" else 2 * n - 1


def wkb_energy(n_bar: int, delta: float, scales: Optional[PhysicalScales] = None) -> float:
    """[3 pi (n_bar + 1/2) / 4]^(2/3) e0 (1 - delta^2)^(2/3)."""
    if n_bar < 0:
        raise InvalidParameterError(f"n_bar must be >= 0, got {n_bar}")
    _require_bound(delta)
    base = (0.75 * math.pi * (n_bar + 0.5)) ** (2.0 / 3.0)
    return base * _scales(scales).e0 * (1.0 - delta * delta) ** (2.0 / 3.0)


def stark_estimate(parity: Parity, n: int, scales: Optional[PhysicalScales], stark: StarkInput) -> float:
    """Second-order expansion x e0 (1 + R_2 delta^2)."""
    energy = level(parity, n, scales).energy
    return energy * (1.0 + float(second_order_coefficient(parity)) * stark.delta ** 2)


class SymmetricLinearWell(BaseLinearSystem):
    """V(z) = F |z| on the whole line."""

    name = "symmetric"
    one_sided = False

    def validate_delta(self, delta: float) -> None:
        _require_bound(delta)

    def labels(self, count: int) -> List[LevelLabel]:
        return [("even" if j % 2 == 0 else "odd", j // 2 + 1) for j in range(count)]

    def exact_levels(self, count: int, delta: float = 0.0) -> np.ndarray:
        self.validate_delta(delta)
        if delta == 0.0:
            tower = _predicted_tower(count, 0.0)
            return tower[1:count + 1]
        return _solve(self.labels(count), delta)

    def wkb_levels(self, count: int, delta: float = 0.0) -> np.ndarray:
        self.validate_delta(delta)
        return np.array([wkb_energy(j, delta) for j in range(count)])

    def potential(self, x: np.ndarray, delta: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.abs(x) + delta * x

    def default_extent(self, count: int, delta: float) -> float:
        self.validate_delta(delta)
        top = float(zeta_array((count + 1) // 2)[-1]) * (1.0 + abs(delta)) ** (2.0 / 3.0)
        return (top + 15.0) * (1.0 - abs(delta)) ** (-1.0 / 3.0)
