"""
Report assembly shared by the command line and the HTTP surface.
"""

import logging
from typing import Any, Dict, List, Optional

from linstark.airy_core import zero_table
from linstark.errors import InvalidParameterError
from linstark.models import Parity, PhysicalScales, ReportRow, StarkInput, StarkReport, SumRuleResult
from linstark.oracle import fd_richardson
from linstark.perturbation import reference_shift, resolve_family, second_order_energy, second_order_sum
from linstark.stark_expansion import solve_series
from linstark.systems import bouncer, symlin, system_factory

logger = logging.getLogger(__name__)

EXPANSION_ORDER = 4


def _units(scales: PhysicalScales) -> str:
    return "dimensionless" if scales.is_dimensionless else "physical"


def zeros_rows(count: int) -> List[Dict[str, Any]]:
    table = zero_table(count)
    return [{"n": n, "zeta": z, "chi": c} for n, (z, c) in enumerate(zip(table.zeta, table.chi), start=1)]


def spectrum_rows(system_name: str, count: int, scales: PhysicalScales, delta: float = 0.0) -> List[ReportRow]:
    """Exact levels alongside their WKB counterparts."""
    system = system_factory.get_system(system_name, scales)
    exact = system.exact_levels(count, delta) * scales.e0
    wkb = system.wkb_levels(count, delta) * scales.e0
    rows = []
    for (parity, n), e_exact, e_wkb in zip(system.labels(count), exact, wkb):
        rows.append(ReportRow(
            system=system.name,
            parity=parity,
            n=n,
            delta=delta,
            quantity="energy",
            analytic_value=float(e_exact),
            comparison_value=float(e_wkb),
            method="wkb",
            units=_units(scales),
        ))
    return rows


def _oracle_energy(system_name: str, parity: Optional[Parity], n: int, delta: float,
                   scales: PhysicalScales, points: Optional[int]) -> float:
    system = system_factory.get_system(system_name, scales)
    position = n if system.one_sided else (2 * n - 1 if parity == "even" else 2 * n)
    result = fd_richardson(system, delta, scales, count=position, points=points)
    return result.energies[position - 1]


def stark_report(
    system_name: str,
    n: int,
    stark: StarkInput,
    scales: PhysicalScales,
    parity: Optional[Parity] = None,
    with_oracle: bool = True,
    k_max: Optional[int] = None,
    grid_points: Optional[int] = None,
    references: Optional[Dict[str, float]] = None,
) -> StarkReport:
    """
    Every available estimate of one shifted level, each compared with the
    exact (closed-form or root-solved) energy.

    `references` may carry omega and/or half_width to append the harmonic
    and infinite-well second-order shifts for the same fbar.
    """
    system = system_factory.get_system(system_name, scales)
    delta = stark.delta
    system.validate_delta(delta)

    if system.name == "bouncer":
        base = bouncer.level(n, scales)
        unperturbed = base.energy
        x = base.zeta_n
        exact = bouncer.stark_exact(n, scales, stark)
        series = solve_series("bouncer", None, EXPANSION_ORDER)
        first_order = 2.0 * delta * unperturbed / 3.0
        pt2 = unperturbed + first_order + second_order_energy("bouncer", n, delta, scales, k_max)
        wkb = bouncer.wkb_energy(bouncer.wkb_index(n), scales, stark)
        mirrored = bouncer.stark_exact(n, scales, StarkInput.from_delta(-delta, scales)) if delta < 1.0 else None
        parity = None
    else:
        if parity is None:
            raise InvalidParameterError("the symmetric well needs a parity")
        base = symlin.level(parity, n, scales)
        unperturbed = base.energy
        x = base.dimensionless_energy
        exact = symlin.solve_perturbed(parity, n, delta, scales).energy
        series = solve_series("symmetric", parity, EXPANSION_ORDER)
        family = "symlin_odd" if parity == "odd" else "symlin_even"
        pt2 = unperturbed + second_order_energy(family, n, delta, scales, k_max)
        wkb = symlin.wkb_energy(symlin.wkb_index(parity, n), delta, scales)
        mirrored = exact

    estimate = unperturbed * series.evaluate(x, delta)
    oracle = _oracle_energy(system.name, parity, n, delta, scales, grid_points) if with_oracle else None

    def row(quantity: str, analytic: float, comparison: Optional[float], method: str) -> ReportRow:
        return ReportRow(
            system=system.name, parity=parity, n=n, delta=delta, quantity=quantity,
            analytic_value=analytic, comparison_value=comparison, method=method, units=_units(scales),
        )

    rows = [
        row("energy", exact, estimate, f"expansion_order_{EXPANSION_ORDER}"),
        row("energy", exact, pt2, "perturbation_second_order"),
        row("energy", exact, wkb, "wkb"),
    ]
    if oracle is not None:
        rows.append(row("energy", exact, oracle, "fd_richardson"))
    if delta != 0.0 and mirrored is not None:
        curvature = ((exact + mirrored) / 2.0 - unperturbed) / (delta ** 2 * unperturbed)
        rows.append(row("R2", float(series.coefficient(2)), curvature, "root_solve_second_difference"))
    for kind, key in (("harmonic", "omega"), ("infinite_well", "half_width")):
        if references and key in references:
            value = reference_shift(kind, stark.fbar, mass=scales.mass, hbar=scales.hbar,
                                    **{key: references[key]}, n=references.get("well_level", 0))
            rows.append(row("reference_shift", value, None, kind))

    return StarkReport(
        system=system.name,
        parity=parity,
        n=n,
        delta=delta,
        unperturbed=unperturbed,
        exact=exact,
        expansion_coefficients=series.as_strings(),
        expansion_estimate=estimate,
        pt_second_order=pt2,
        wkb=wkb,
        oracle=oracle,
        rows=rows,
    )


def expansion_coefficients(system_name: str, parity: Optional[Parity], order: int) -> Dict[str, str]:
    system = system_factory.get_system(system_name)
    return solve_series(system.name, parity if system.name == "symmetric" else None, order).as_strings()


def sumrule_rows(family: str, levels: List[int], k_max: Optional[int] = None) -> List[SumRuleResult]:
    resolved = resolve_family(family)
    return [second_order_sum(resolved, n, k_max) for n in levels]
