"""
The quantum bouncer: V(z) = F z above an impenetrable floor at z = 0.

Energies are E_n = zeta_n e0 where -zeta_n is the n-th zero of Ai. An added
force fbar only rescales the slope, so every exact result under the field
follows from the substitution F -> F + fbar.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np
import sympy as sp

from linstark.airy_core import ai_and_derivative, find_zero, zero_seed, zeta_array
from linstark.errors import InvalidParameterError, NoBoundStateError
from linstark.models import BouncerLevel, Expectations, PhysicalScales, StarkInput
from linstark.stark_expansion import binomial_series
from linstark.systems.base import BaseLinearSystem, LevelLabel

logger = logging.getLogger(__name__)


def _require_index(n: int, label: str = "n") -> None:
    if n < 1:
        raise InvalidParameterError(f"{label} must be >= 1, got {n}")


def _require_bound(delta: float) -> None:
    if not delta > -1.0:
        raise NoBoundStateError(f"delta = {delta} leaves no confining slope (need delta > -1)")


def _scales(scales: Optional[PhysicalScales]) -> PhysicalScales:
    return scales or PhysicalScales.dimensionless()


def level(n: int, scales: Optional[PhysicalScales] = None) -> BouncerLevel:
    _require_index(n)
    zeta = find_zero("ai", n)
    return BouncerLevel(n=n, zeta_n=zeta, energy=zeta * _scales(scales).e0)


def wavefunction(n: int, scales: Optional[PhysicalScales], z):
    """
    Normalised eigenfunction psi_n(z) = Ai(z/rho - zeta_n) / (sqrt(rho) Ai'(-zeta_n)).

    Vanishes identically below the floor. Accepts scalars or arrays.
    """
    _require_index(n)
    scales = _scales(scales)
    zeta = find_zero("ai", n)
    z_arr = np.asarray(z, dtype=float)
    _, slope_at_floor = ai_and_derivative(-zeta)
    ai, _ = ai_and_derivative(z_arr / scales.rho - zeta)
    psi = ai.reshape(z_arr.shape) / (math.sqrt(scales.rho) * slope_at_floor[0])
    psi = np.where(z_arr < 0, 0.0, psi)
    return float(psi) if psi.ndim == 0 else psi


def expectations(n: int, scales: Optional[PhysicalScales] = None) -> Expectations:
    """Virial split of E_n and the mean height, all in closed form."""
    scales = _scales(scales)
    zeta = level(n, scales).zeta_n
    return Expectations(
        mean_V=2.0 * zeta * scales.e0 / 3.0,
        mean_T=zeta * scales.e0 / 3.0,
        mean_z=2.0 * zeta * scales.rho / 3.0,
        mean_abs_z=2.0 * zeta * scales.rho / 3.0,
    )


def dipole(n: int, k: int, scales: Optional[PhysicalScales] = None) -> float:
    """<n|z|k> = -2 rho / (zeta_n - zeta_k)^2 for n != k."""
    _require_index(n)
    _require_index(k, "k")
    if n == k:
        raise InvalidParameterError("diagonal element requested; use expectations().mean_z")
    zeta_n = find_zero("ai", n)
    zeta_k = find_zero("ai", k)
    return -2.0 * _scales(scales).rho / (zeta_n - zeta_k) ** 2


def stark_exact(n: int, scales: Optional[PhysicalScales], stark: StarkInput) -> float:
    """E_n under the added force: zeta_n e0 (1 + delta)^(2/3)."""
    _require_bound(stark.delta)
    return level(n, scales).energy * (1.0 + stark.delta) ** (2.0 / 3.0)


def stark_orders(n: int, scales: Optional[PhysicalScales] = None, order: int = 3) -> Dict[str, Fraction]:
    """
    Exact coefficients c_k of E_n = zeta_n e0 (1 + sum c_k delta^k).

    The coefficients do not depend on n or on the scales; both are accepted
    so callers can pair the result with level(n, scales).energy.
    """
    _require_index(n)
    series = binomial_series(sp.Rational(2, 3), order)
    return {f"c{k}": Fraction(int(series[k].p), int(series[k].q)) for k in range(1, order + 1)}


def order_shifts(n: int, scales: Optional[PhysicalScales], stark: StarkInput, order: int = 3) -> List[float]:
    """Energy shift contributed by each power of delta, lowest first."""
    base = level(n, scales).energy
    return [float(c) * base * stark.delta ** k for k, c in enumerate(stark_orders(n, scales, order).values(), start=1)]


def wkb_index(n: int) -> int:
    """Semiclassical quantum number n_tilde of the level with label n."""
    _require_index(n)
    return n - 1


def wkb_energy(n_tilde: int, scales: Optional[PhysicalScales], stark: StarkInput) -> float:
    """[3 pi (n_tilde + 3/4) / 2]^(2/3) e0 (1 + delta)^(2/3)."""
    if n_tilde < 0:
        raise InvalidParameterError(f"n_tilde must be >= 0, got {n_tilde}")
    _require_bound(stark.delta)
    base = float(zero_seed("ai", n_tilde + 1))
    return base * _scales(scales).e0 * (1.0 + stark.delta) ** (2.0 / 3.0)


def second_order_shift(
    n: int,
    scales: Optional[PhysicalScales],
    stark: StarkInput,
    k_max: Optional[int] = None,
) -> float:
    """Rayleigh-Schroedinger second-order shift, 4 delta^2 e0 sum_{k!=n} (zeta_n - zeta_k)^-5."""
    from linstark.perturbation import second_order_energy

    return second_order_energy("bouncer", n, stark.delta, _scales(scales), k_max)


class QuantumBouncer(BaseLinearSystem):
    """Linear potential above an impenetrable floor."""

    name = "bouncer"
    one_sided = True

    def validate_delta(self, delta: float) -> None:
        _require_bound(delta)

    def labels(self, count: int) -> List[LevelLabel]:
        return [(None, n) for n in range(1, count + 1)]

    def exact_levels(self, count: int, delta: float = 0.0) -> np.ndarray:
        self.validate_delta(delta)
        return zeta_array(count) * (1.0 + delta) ** (2.0 / 3.0)

    def wkb_levels(self, count: int, delta: float = 0.0) -> np.ndarray:
        self.validate_delta(delta)
        return zero_seed("ai", np.arange(1, count + 1)) * (1.0 + delta) ** (2.0 / 3.0)

    def potential(self, x: np.ndarray, delta: float) -> np.ndarray:
        return (1.0 + delta) * np.asarray(x, dtype=float)

    def default_extent(self, count: int, delta: float) -> float:
        self.validate_delta(delta)
        return (float(zeta_array(count)[-1]) + 15.0) * (1.0 + delta) ** (-1.0 / 3.0)
