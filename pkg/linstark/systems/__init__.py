"""
Linear-potential system implementations.
"""

from linstark.systems.factory import SystemFactory, system_factory

__all__ = ["SystemFactory", "system_factory"]
