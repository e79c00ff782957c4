"""
Bracketed Newton iteration for many independent scalar roots at once.
"""

import logging
from typing import Callable, Tuple

import numpy as np

from linstark.errors import BracketError, ZeroFindingError

logger = logging.getLogger(__name__)

FuncWithSlope = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def newton_bisect(
    func: FuncWithSlope,
    lo,
    hi,
    guess=None,
    xtol: float = 1e-15,
    max_iterations: int = 200,
) -> np.ndarray:
    """
    Safeguarded Newton iteration on a vector of brackets.

    Every element keeps a sign-change bracket [lo, hi]. A Newton step that
    leaves the bracket, or that is longer than half the bracket, is replaced
    by a bisection step, so the iteration cannot wander to a neighbouring
    root.

    Args:
        func: maps x to (f(x), f'(x)), elementwise
        lo, hi: bracket ends; f must change sign on every bracket
        guess: starting points inside the brackets (midpoints if omitted)
        xtol: relative step size at which an element counts as converged
        max_iterations: hard cap on iterations

    Returns:
        Array of roots, same shape as the brackets.

    Raises:
        BracketError: some bracket has no sign change
        ZeroFindingError: the iteration did not converge
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    f_lo, _ = func(lo)
    f_hi, _ = func(hi)
    no_change = np.sign(f_lo) * np.sign(f_hi) > 0
    if np.any(no_change):
        raise BracketError(
            f"no sign change on {int(no_change.sum())} bracket(s), "
            f"first at [{lo[no_change][0]:.6g}, {hi[no_change][0]:.6g}]"
        )

    x = 0.5 * (lo + hi) if guess is None else np.clip(np.array(guess, dtype=float), lo, hi)
    done = np.zeros(x.shape, dtype=bool)
    for iteration in range(1, max_iterations + 1):
        f, slope = func(x)
        on_lo_side = np.sign(f) == np.sign(f_lo)
        lo = np.where(on_lo_side, x, lo)
        f_lo = np.where(on_lo_side, f, f_lo)
        hi = np.where(on_lo_side, hi, x)

        with np.errstate(divide="ignore", invalid="ignore"):
            candidate = x - f / slope
        width = hi - lo
        reject = (
            ~np.isfinite(candidate)
            | (candidate <= lo)
            | (candidate >= hi)
            | (np.abs(candidate - x) > 0.5 * width)
        )
        candidate = np.where(reject, 0.5 * (lo + hi), candidate)
        candidate = np.where(f == 0.0, x, candidate)

        scale = np.maximum(1.0, np.abs(x))
        done = (np.abs(candidate - x) <= xtol * scale) | (width <= xtol * scale)
        x = candidate
        if np.all(done):
            logger.debug("newton_bisect converged in %d iterations", iteration)
            return x

    raise ZeroFindingError(
        f"{int((~done).sum())} root(s) did not converge in {max_iterations} iterations"
    )
