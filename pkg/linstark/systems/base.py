"""
Base interface for linear-potential systems.
"""

from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

import numpy as np

from linstark.models import Parity, PhysicalScales, SystemName


LevelLabel = Tuple[Optional[Parity], int]


class BaseLinearSystem(ABC):
    """
    Abstract base class for a particle in a piecewise-linear potential.

    Implementations expose the unperturbed spectrum, the spectrum under an
    added uniform force (delta = fbar / F) and the dimensionless potential
    used by the finite-difference oracle. Energies are returned in units of
    e0 and lengths in units of rho unless a method says otherwise.
    """

    name: SystemName
    one_sided: bool = False

    def __init__(self, scales: Optional[PhysicalScales] = None):
        """
        Initialize the system.

        Args:
            scales: physical scales; dimensionless (rho = e0 = 1) if omitted
        """
        self.scales = scales or PhysicalScales.dimensionless()

    @abstractmethod
    def validate_delta(self, delta: float) -> None:
        """
        Reject a field strength for which no bound states exist.

        Raises:
            NoBoundStateError: the total slope vanishes or turns negative
        """

    @abstractmethod
    def labels(self, count: int) -> List[LevelLabel]:
        """(parity, n) of the lowest `count` levels, ascending in energy."""

    @abstractmethod
    def exact_levels(self, count: int, delta: float = 0.0) -> np.ndarray:
        """
        Lowest `count` dimensionless energies at field strength `delta`.

        Args:
            count: number of levels
            delta: fbar / F

        Returns:
            Ascending array of E / e0.
        """

    @abstractmethod
    def wkb_levels(self, count: int, delta: float = 0.0) -> np.ndarray:
        """Semiclassical counterparts of exact_levels."""

    @abstractmethod
    def potential(self, x: np.ndarray, delta: float) -> np.ndarray:
        """V / e0 at positions x (in units of rho)."""

    @abstractmethod
    def default_extent(self, count: int, delta: float) -> float:
        """
        Distance from the origin (in rho) past which the lowest `count`
        states are negligible.
        """

    def level_energies(self, count: int, delta: float = 0.0) -> np.ndarray:
        """exact_levels converted to physical energy units."""
        return self.exact_levels(count, delta) * self.scales.e0
