"""Shared fixtures."""

import os

import numpy as np
import pytest

from linstark.config import get_settings
from linstark.models import PhysicalScales

_OVERRIDES = ("LINSTARK_TOL", "LINSTARK_LOG_LEVEL", "LINSTARK_KMAX", "LINSTARK_GRID_POINTS")


def _reset():
    # the CLI writes its flag overrides into os.environ
    for name in _OVERRIDES:
        os.environ.pop(name, None)
    get_settings.cache_clear()


@pytest.fixture(autouse=True)
def fresh_settings():
    """Each test starts from default settings."""
    _reset()
    yield
    _reset()


@pytest.fixture
def unit_scales() -> PhysicalScales:
    return PhysicalScales.dimensionless()


@pytest.fixture
def scaled() -> PhysicalScales:
    """Scales with rho and e0 away from 1."""
    return PhysicalScales(mass=1.7, slope=0.3, hbar=1.1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
