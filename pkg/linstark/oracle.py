"""
Independent numerical cross-checks: adaptive Gauss-Kronrod quadrature and a
finite-difference Schroedinger eigensolver.

Neither routine uses a closed form from the rest of the package. The
eigensolver discretises -psi'' + v(x) psi = eps psi (x in rho, eps in e0)
with the 3-point Laplacian and finds the lowest eigenvalues of the
resulting symmetric tridiagonal matrix by Sturm-sequence multisection.
"""

import heapq
import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from linstark.errors import GridTooNarrowError, InvalidParameterError, QuadratureError
from linstark.models import GridSpec, PhysicalScales, RichardsonResult
from linstark.systems.base import BaseLinearSystem

logger = logging.getLogger(__name__)

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]
_KRONROD_NODES = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_KRONROD_WEIGHTS = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_GAUSS_WEIGHTS = np.array([
    0.0,
    0.129484966168869693270611432679082,
    0.0,
    0.279705391489276667901467771423780,
    0.0,
    0.381830050505118944950369775488975,
    0.0,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_KRONROD_NODES[:-1], _KRONROD_NODES[::-1]])
_WK = np.concatenate([_KRONROD_WEIGHTS[:-1], _KRONROD_WEIGHTS[::-1]])
_WG = np.concatenate([_GAUSS_WEIGHTS[:-1], _GAUSS_WEIGHTS[::-1]])

Integrand = Callable[[np.ndarray], np.ndarray]


def _gauss_kronrod(f: Integrand, a: float, b: float) -> Tuple[float, float, float]:
    """G7-K15 on [a, b]: (integral, error estimate, round-off floor of that estimate)."""
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    values = np.asarray(f(centre + half * _NODES), dtype=float)
    if not np.all(np.isfinite(values)):
        raise QuadratureError(f"integrand is not finite on [{a:.6g}, {b:.6g}]")
    kronrod = float(np.dot(_WK, values))
    gauss = float(np.dot(_WG, values))
    floor = abs(half) * 50.0 * np.finfo(float).eps * float(np.dot(_WK, np.abs(values)))
    error = max(abs(half) * (200.0 * abs(kronrod - gauss)) ** 1.5, floor)
    return kronrod * half, error, floor


def quadrature_with_error(
    f: Integrand,
    a: float,
    b: float,
    tol: float = 1e-10,
    rtol: float = 0.0,
    limit: int = 2000,
    min_intervals: int = 1,
) -> Tuple[float, float]:
    """
    Adaptive G7-K15 quadrature of a vectorised integrand.

    The interval with the largest error estimate is bisected until the
    summed estimate drops below max(tol, rtol * |integral|). A target
    tighter than the accumulated rounding of the rule itself cannot be
    met by further bisection, so it is raised to twice that floor (the
    returned estimate then reports the achieved accuracy).

    Args:
        f: integrand accepting and returning numpy arrays
        a, b: finite integration limits; semi-infinite ranges must be
            truncated by the caller
        tol: absolute error target
        rtol: relative error target
        limit: maximum number of subintervals
        min_intervals: initial uniform split

    Returns:
        (integral, error estimate)

    Raises:
        InvalidParameterError: non-finite limits or tolerance
        QuadratureError: the target was not met within `limit` intervals
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidParameterError("quadrature limits must be finite")
    if tol <= 0 and rtol <= 0:
        raise InvalidParameterError("need a positive tolerance")
    if a == b:
        return 0.0, 0.0

    edges = np.linspace(a, b, min_intervals + 1)
    heap: List[Tuple[float, float, float, float, float]] = []
    total = 0.0
    total_error = 0.0
    total_floor = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        value, error, floor = _gauss_kronrod(f, left, right)
        heapq.heappush(heap, (-error, left, right, value, floor))
        total += value
        total_error += error
        total_floor += floor

    def target() -> float:
        return max(tol, rtol * abs(total), 2.0 * total_floor)

    while total_error > target():
        if len(heap) >= limit:
            raise QuadratureError(
                f"no convergence on [{a:.6g}, {b:.6g}] after {limit} intervals "
                f"(error estimate {total_error:.3e})"
            )
        neg_error, left, right, value, floor = heapq.heappop(heap)
        mid = 0.5 * (left + right)
        value_l, error_l, floor_l = _gauss_kronrod(f, left, mid)
        value_r, error_r, floor_r = _gauss_kronrod(f, mid, right)
        heapq.heappush(heap, (-error_l, left, mid, value_l, floor_l))
        heapq.heappush(heap, (-error_r, mid, right, value_r, floor_r))
        total += value_l + value_r - value
        total_error += error_l + error_r + neg_error
        total_floor += floor_l + floor_r - floor

    if 2.0 * total_floor > max(tol, rtol * abs(total)):
        logger.debug("quadrature target on [%g, %g] raised to the round-off floor %.3e", a, b, 2.0 * total_floor)
    # re-sum to drop the rounding accumulated by the running updates
    total = math.fsum(entry[3] for entry in heap)
    total_error = math.fsum(-entry[0] for entry in heap)
    logger.debug("quadrature on [%g, %g] used %d intervals", a, b, len(heap))
    return total, total_error


def gauss_legendre_panels(
    lower: float, upper: float, width: float = 0.5, order: int = 20
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights of a composite Gauss-Legendre rule on [lower, upper].

    Panels have equal width no larger than `width`; every integrand that is
    smooth on [lower, upper] can then be integrated with one vectorised
    evaluation. Place kinks at panel edges by splitting the range.
    """
    if not (math.isfinite(lower) and math.isfinite(upper)) or upper <= lower:
        raise InvalidParameterError("panel limits must be finite with lower < upper")
    if width <= 0 or order < 1:
        raise InvalidParameterError("need a positive panel width and order")
    base_nodes, base_weights = np.polynomial.legendre.leggauss(order)
    count = max(1, math.ceil((upper - lower) / width))
    edges = np.linspace(lower, upper, count + 1)
    half = 0.5 * np.diff(edges)
    centres = 0.5 * (edges[:-1] + edges[1:])
    nodes = (centres[:, None] + half[:, None] * base_nodes[None, :]).ravel()
    weights = (half[:, None] * base_weights[None, :]).ravel()
    return nodes, weights


def quadrature(f: Integrand, a: float, b: float, tol: float = 1e-10, **kwargs) -> float:
    """Integral of f over [a, b]; see quadrature_with_error."""
    return quadrature_with_error(f, a, b, tol, **kwargs)[0]


# ---------------------------------------------------------------------------
# Tridiagonal eigenproblems


def sturm_count(diag: np.ndarray, off_sq: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below each shift, from the LDL^T inertia."""
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(off_sq, initial=0.0)))
    q = diag[0] - shifts
    count = (q < 0).astype(int)
    for i in range(1, len(diag)):
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        q = diag[i] - shifts - off_sq[i - 1] / q
        count += q < 0
    return count


def tridiagonal_eigenvalues(
    diag: np.ndarray,
    off: np.ndarray,
    count: int,
    sections: int = 31,
    max_rounds: int = 60,
) -> np.ndarray:
    """
    Lowest `count` eigenvalues of a symmetric tridiagonal matrix.

    All intervals are refined together; each round evaluates `sections`
    interior shifts per eigenvalue in one vectorised Sturm sweep.
    """
    if count < 1 or count > len(diag):
        raise InvalidParameterError(f"cannot extract {count} eigenvalues from a {len(diag)}x{len(diag)} matrix")
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lower = float(np.min(diag - radius))
    upper = float(np.max(diag + radius))
    norm = max(abs(lower), abs(upper))
    abs_tol = 4.0 * np.finfo(float).eps * norm
    off_sq = off * off

    lo = np.full(count, lower)
    hi = np.full(count, upper)
    target = np.arange(count)
    fractions = np.arange(1, sections + 1) / (sections + 1)
    for round_index in range(1, max_rounds + 1):
        width = hi - lo
        if np.all(width <= np.maximum(abs_tol, 2.0 * np.finfo(float).eps * np.abs(hi))):
            logger.debug("Sturm multisection finished after %d rounds", round_index - 1)
            return 0.5 * (lo + hi)
        shifts = lo[:, None] + width[:, None] * fractions[None, :]
        counts = sturm_count(diag, off_sq, shifts.ravel()).reshape(shifts.shape)
        below = counts <= target[:, None]
        # last shift still below the eigenvalue, first shift above it
        last_below = np.where(below.any(axis=1), below.sum(axis=1) - 1, -1)
        new_lo = np.where(last_below >= 0, shifts[np.arange(count), np.maximum(last_below, 0)], lo)
        first_above = last_below + 1
        new_hi = np.where(first_above < sections, shifts[np.arange(count), np.minimum(first_above, sections - 1)], hi)
        lo, hi = new_lo, new_hi
    raise InvalidParameterError(f"Sturm multisection did not converge in {max_rounds} rounds")


def inverse_iteration(diag: np.ndarray, off: np.ndarray, eigenvalues: np.ndarray, sweeps: int = 2) -> np.ndarray:
    """
    Unit eigenvectors for known eigenvalues (columns), by inverse iteration
    with a Thomas solve.
    """
    size = len(diag)
    tiny = np.finfo(float).eps * max(1.0, float(np.max(np.abs(diag))))
    vectors = np.ones((size, len(eigenvalues)))
    for _ in range(sweeps):
        pivot = np.empty((size, len(eigenvalues)))
        rhs = vectors.copy()
        pivot[0] = diag[0] - eigenvalues
        for i in range(1, size):
            prev = np.where(np.abs(pivot[i - 1]) < tiny, tiny, pivot[i - 1])
            ratio = off[i - 1] / prev
            pivot[i] = diag[i] - eigenvalues - ratio * off[i - 1]
            rhs[i] -= ratio * rhs[i - 1]
        pivot[-1] = np.where(np.abs(pivot[-1]) < tiny, tiny, pivot[-1])
        solution = np.empty_like(rhs)
        solution[-1] = rhs[-1] / pivot[-1]
        for i in range(size - 2, -1, -1):
            denom = np.where(np.abs(pivot[i]) < tiny, tiny, pivot[i])
            solution[i] = (rhs[i] - off[i] * solution[i + 1]) / denom
        vectors = solution / np.linalg.norm(solution, axis=0)
    return vectors


# ---------------------------------------------------------------------------
# Finite-difference Schroedinger oracle


def default_grid(
    system: BaseLinearSystem,
    delta: float,
    scales: Optional[PhysicalScales] = None,
    count: int = 3,
    points: Optional[int] = None,
) -> GridSpec:
    """Dirichlet grid wide enough for the lowest `count` states."""
    from linstark.config import get_settings

    scales = scales or system.scales
    points = points or get_settings().grid_points
    extent = system.default_extent(count, delta) * scales.rho
    z_min = 0.0 if system.one_sided else -extent
    return GridSpec(z_min=z_min, z_max=extent, points=points)


def _check_grid(system: BaseLinearSystem, grid: GridSpec, x: np.ndarray, potential: np.ndarray,
                levels: np.ndarray, vectors: np.ndarray) -> None:
    band = 5.0
    open_ends = [x >= x[-1] - band]
    if not system.one_sided:
        open_ends.append(x <= x[0] + band)
    top = float(levels[-1])
    for mask in open_ends:
        if float(np.min(potential[mask])) < top:
            raise GridTooNarrowError(
                f"turning point of level {len(levels)} lies within 5 rho of the grid edge "
                f"[{grid.z_min:.6g}, {grid.z_max:.6g}]"
            )
    edge = [x >= x[-1] - 1.0]
    if not system.one_sided:
        edge.append(x <= x[0] + 1.0)
    for mask in edge:
        mass = np.sum(vectors[mask] ** 2, axis=0)
        if np.any(mass > 1e-8):
            raise GridTooNarrowError(
                f"boundary mass {float(np.max(mass)):.2e} exceeds 1e-8; widen the grid"
            )


def fd_eigenvalues(
    system: BaseLinearSystem,
    delta: float,
    scales: Optional[PhysicalScales] = None,
    grid: Optional[GridSpec] = None,
    count: int = 3,
    check_boundary: bool = True,
) -> List[float]:
    """
    Lowest `count` eigenvalues of the discretised Hamiltonian, in energy units.

    Raises:
        NoBoundStateError: delta outside the system's bound-state range
        InvalidParameterError: one-sided system on a grid not starting at 0
        GridTooNarrowError: a computed state reaches the grid edge
    """
    system.validate_delta(delta)
    scales = scales or system.scales
    grid = grid or default_grid(system, delta, scales, count)
    if system.one_sided and grid.z_min != 0.0:
        raise InvalidParameterError("bouncer grids must start at the floor, z_min = 0")

    x = np.linspace(grid.z_min, grid.z_max, grid.points)[1:-1] / scales.rho
    h = grid.spacing / scales.rho
    potential = system.potential(x, delta)
    diag = 2.0 / h ** 2 + potential
    off = np.full(len(x) - 1, -1.0 / h ** 2)
    levels = tridiagonal_eigenvalues(diag, off, count)
    if check_boundary:
        vectors = inverse_iteration(diag, off, levels)
        _check_grid(system, grid, x, potential, levels, vectors)
    logger.debug("%s FD levels at delta=%g on %d points: %s", system.name, delta, grid.points, levels)
    return (levels * scales.e0).tolist()


def fd_richardson(
    system: BaseLinearSystem,
    delta: float,
    scales: Optional[PhysicalScales] = None,
    count: int = 3,
    points: Optional[int] = None,
) -> RichardsonResult:
    """
    Three-level Richardson extrapolation of fd_eigenvalues.

    Grids with `points`, (points+1)/2 and (points+3)/4 nodes share their
    endpoints, so the spacing doubles between levels. The extrapolated
    energy is (4 E_h - E_2h) / 3 and the observed order is
    log2((E_4h - E_2h) / (E_2h - E_h)).
    """
    from linstark.config import get_settings

    scales = scales or system.scales
    points = points or get_settings().grid_points
    if (points - 1) % 4:
        raise InvalidParameterError("points - 1 must be divisible by 4 for nested grids")
    fine = default_grid(system, delta, scales, count, points)
    sizes = [points, (points - 1) // 2 + 1, (points - 1) // 4 + 1]
    raw = []
    for index, size in enumerate(sizes):
        grid = GridSpec(z_min=fine.z_min, z_max=fine.z_max, points=size)
        raw.append(fd_eigenvalues(system, delta, scales, grid, count, check_boundary=index == 0))
    e_h, e_2h, e_4h = (np.array(level) for level in raw)
    with np.errstate(divide="ignore", invalid="ignore"):
        order = np.log2(np.abs((e_4h - e_2h) / (e_2h - e_h)))
    return RichardsonResult(
        system=system.name,
        delta=delta,
        points=sizes,
        raw=raw,
        energies=((4.0 * e_h - e_2h) / 3.0).tolist(),
        observed_order=order.tolist(),
    )
