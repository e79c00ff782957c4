"""
System factory for creating and looking up linear-potential systems.
"""

from typing import Dict, List, Optional

from linstark.errors import InvalidParameterError
from linstark.models import PhysicalScales
from linstark.systems.base import BaseLinearSystem
from linstark.systems.bouncer import QuantumBouncer
from linstark.systems.symlin import SymmetricLinearWell

_ALIASES = {"symlin": "symmetric"}


class SystemFactory:
    """
    Registry of the available systems, keyed by name.
    """

    def __init__(self):
        self._systems: Dict[str, type] = {}
        self._initialize_systems()

    def _initialize_systems(self) -> None:
        self._systems["bouncer"] = QuantumBouncer
        self._systems["symmetric"] = SymmetricLinearWell

    def get_system(self, name: str, scales: Optional[PhysicalScales] = None) -> BaseLinearSystem:
        """
        Build a system by name.

        Args:
            name: "bouncer" or "symmetric" ("symlin" is accepted)
            scales: physical scales; dimensionless if omitted

        Returns:
            A fresh system instance bound to `scales`

        Raises:
            InvalidParameterError: unknown name
        """
        key = _ALIASES.get(name.lower(), name.lower())
        if key not in self._systems:
            raise InvalidParameterError(
                f"System '{name}' is not available. Available systems: {self.get_available_systems()}"
            )
        return self._systems[key](scales)

    def has_system(self, name: str) -> bool:
        return _ALIASES.get(name.lower(), name.lower()) in self._systems

    def get_available_systems(self) -> List[str]:
        return list(self._systems.keys())


# Global instance
system_factory = SystemFactory()
