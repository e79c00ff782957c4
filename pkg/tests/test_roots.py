import math

import numpy as np
import pytest

from linstark.errors import BracketError, ZeroFindingError
from linstark.roots import newton_bisect


def _cos(x):
    return np.cos(x), -np.sin(x)


def test_vector_of_brackets():
    k = np.arange(1, 6)
    roots = newton_bisect(_cos, (k - 1) * math.pi + 0.1, k * math.pi - 0.1)
    np.testing.assert_allclose(roots, (k - 0.5) * math.pi, rtol=1e-14)


def test_guess_outside_bracket_is_clipped():
    root = newton_bisect(_cos, np.array([1.0]), np.array([2.0]), guess=np.array([10.0]))
    assert root[0] == pytest.approx(math.pi / 2, rel=1e-14)


def test_flat_slope_falls_back_to_bisection():
    # f' vanishes at the starting guess
    root = newton_bisect(lambda x: (x ** 3 - 1.0, 3.0 * x ** 2), np.array([-2.0]), np.array([3.0]),
                         guess=np.array([0.0]))
    assert root[0] == pytest.approx(1.0, rel=1e-14)


def test_bracket_without_sign_change():
    with pytest.raises(BracketError):
        newton_bisect(_cos, np.array([0.0, 2.0]), np.array([1.0, 3.0]))


def test_iteration_cap():
    with pytest.raises(ZeroFindingError):
        newton_bisect(lambda x: (np.sign(x - 0.3), np.zeros_like(x)), np.array([0.0]), np.array([1.0]),
                      max_iterations=3)
