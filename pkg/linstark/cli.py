"""
Command-line front end.

    python -m linstark zeros --count 10
    python -m linstark spectrum --system symmetric --count 6
    python -m linstark stark --system symmetric --parity odd --n 1 --delta 0.1
    python -m linstark expand --parity even --order 2 --format json
    python -m linstark sumrule --family odd7 --n 1 --kmax 2000
    python -m linstark verify
    python -m linstark serve

Exit status: 0 on success, 1 when a requested check fails, 2 on invalid
input or a numerical failure.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, ValidationError

from linstark import __version__
from linstark.config import get_settings
from linstark.errors import LinstarkError
from linstark.models import PhysicalScales, StarkInput
from linstark.reports import (
    expansion_coefficients,
    spectrum_rows,
    stark_report,
    sumrule_rows,
    zeros_rows,
)
from linstark.verification import CHECKS, run_checks

logger = logging.getLogger("linstark.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def _format_scalar(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.15g}")
    return value


def _plain(value: Any) -> Any:
    """Models to dicts, floats rounded to 15 significant digits."""
    if isinstance(value, BaseModel):
        value = value.model_dump()
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return _format_scalar(value)


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.15g}"
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return str(value)


def render(payload: Any, rows: List[Dict[str, Any]], fmt: str) -> str:
    """JSON of the whole payload, or CSV of the flat rows."""
    if fmt == "json":
        return json.dumps(_plain(payload), indent=2) + "\n"
    buffer = io.StringIO()
    if rows:
        plain = [_plain(row) for row in rows]
        writer = csv.DictWriter(buffer, fieldnames=list(plain[0].keys()), lineterminator="\n")
        writer.writeheader()
        for row in plain:
            writer.writerow({key: _csv_cell(value) for key, value in row.items()})
    return buffer.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _scales(args: argparse.Namespace) -> PhysicalScales:
    return PhysicalScales(mass=args.mass, slope=args.slope, hbar=args.hbar)


def _stark_input(args: argparse.Namespace, scales: PhysicalScales) -> StarkInput:
    if args.fbar is not None:
        return StarkInput.from_force(args.fbar, scales)
    return StarkInput.from_delta(args.delta, scales)


# ---------------------------------------------------------------------------
# Commands


def cmd_zeros(args: argparse.Namespace) -> int:
    rows = zeros_rows(args.count)
    _emit(render(rows, rows, args.format), args.out)
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    rows = spectrum_rows(args.system, args.count, _scales(args), args.delta)
    _emit(render(rows, rows, args.format), args.out)
    return EXIT_OK


def cmd_stark(args: argparse.Namespace) -> int:
    scales = _scales(args)
    references = {
        key: value
        for key, value in (("omega", args.omega), ("half_width", args.half_width), ("well_level", args.well_level))
        if value is not None
    }
    report = stark_report(
        args.system,
        args.n,
        _stark_input(args, scales),
        scales,
        parity=args.parity,
        with_oracle=not args.no_oracle,
        k_max=args.kmax,
        grid_points=args.grid_points,
        references=references or None,
    )
    _emit(render(report, report.rows, args.format), args.out)
    return EXIT_OK


def cmd_expand(args: argparse.Namespace) -> int:
    coefficients = expansion_coefficients(args.system, args.parity, args.order)
    rows = [{"coefficient": key, "value": value} for key, value in coefficients.items()]
    _emit(render(coefficients, rows, args.format), args.out)
    return EXIT_OK


def cmd_sumrule(args: argparse.Namespace) -> int:
    results = sumrule_rows(args.family, args.n, args.kmax)
    _emit(render(results, results, args.format), args.out)
    tol = get_settings().tol
    return EXIT_OK if all(result.relative_error < tol for result in results) else EXIT_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_checks(args.check)
    _emit(render(results, results, args.format), args.out)
    failed = [result.name for result in results if not result.passed]
    if failed:
        logger.error("%d check(s) failed: %s", len(failed), ", ".join(failed))
        return EXIT_FAILED
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    settings = get_settings()
    uvicorn.run(
        "linstark.main:app",
        host=args.host or settings.host,
        port=args.port or settings.port,
        log_level=settings.log_level.lower(),
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format (default: csv).")
    parser.add_argument("--out", help="Write the report to this path instead of stdout.")


def _add_scales(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mass", type=float, default=0.5, help="Particle mass (default 0.5, so rho = e0 = 1).")
    parser.add_argument("--slope", type=float, default=1.0, help="Potential slope F.")
    parser.add_argument("--hbar", type=float, default=1.0, help="Reduced Planck constant.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linstark",
        description="Airy-function spectra and Stark shifts of the quantum bouncer and the symmetric linear well.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level (default from LINSTARK_LOG_LEVEL).")
    parser.add_argument("--tol", type=float, help="Relative pass/fail tolerance (default from LINSTARK_TOL).")
    sub = parser.add_subparsers(dest="command", required=True)

    zeros = sub.add_parser("zeros", help="Tabulate the zeros of Ai and Ai'.")
    zeros.add_argument("--count", type=int, default=10)
    _add_output(zeros)
    zeros.set_defaults(handler=cmd_zeros)

    spectrum = sub.add_parser("spectrum", help="Exact energies with their WKB counterparts.")
    spectrum.add_argument("--system", default="bouncer", help="bouncer or symmetric")
    spectrum.add_argument("--count", type=int, default=10)
    spectrum.add_argument("--delta", type=float, default=0.0)
    _add_scales(spectrum)
    _add_output(spectrum)
    spectrum.set_defaults(handler=cmd_spectrum)

    stark = sub.add_parser("stark", help="Compare every estimate of one Stark-shifted level.")
    stark.add_argument("--system", default="bouncer", help="bouncer or symmetric")
    stark.add_argument("--parity", choices=["even", "odd"], help="Required for the symmetric well.")
    stark.add_argument("--n", type=int, default=1)
    field = stark.add_mutually_exclusive_group(required=True)
    field.add_argument("--delta", type=float, help="Relative field fbar / F.")
    field.add_argument("--fbar", type=float, help="Added force in physical units.")
    stark.add_argument("--kmax", type=int, help="Truncation of the perturbation sum.")
    stark.add_argument("--grid-points", type=int, help="Finest finite-difference grid (points - 1 divisible by 4).")
    stark.add_argument("--no-oracle", action="store_true", help="Skip the finite-difference oracle.")
    stark.add_argument("--omega", type=float, help="Add the harmonic-oscillator reference shift.")
    stark.add_argument("--half-width", type=float, help="Add the infinite-well reference shift.")
    stark.add_argument("--well-level", type=int, help="Infinite-well level (0-based) for the reference shift.")
    _add_scales(stark)
    _add_output(stark)
    stark.set_defaults(handler=cmd_stark)

    expand = sub.add_parser("expand", help="Exact expansion coefficients R_1..R_order.")
    expand.add_argument("--system", default="symmetric", help="bouncer or symmetric")
    expand.add_argument("--parity", choices=["even", "odd"], default="odd")
    expand.add_argument("--order", type=int, default=4)
    _add_output(expand)
    expand.set_defaults(handler=cmd_expand)

    sumrule = sub.add_parser("sumrule", help="Second-order perturbation sums against their closed forms.")
    sumrule.add_argument("--family", default="bouncer", help="bouncer5, odd7 or even7 (or the long names)")
    sumrule.add_argument("--n", type=int, nargs="+", default=[1])
    sumrule.add_argument("--kmax", type=int)
    _add_output(sumrule)
    sumrule.set_defaults(handler=cmd_sumrule)

    verify = sub.add_parser("verify", help="Run the acceptance suite.")
    verify.add_argument("--check", action="append", choices=list(CHECKS),
                        help="Run only this check group (repeatable).")
    _add_output(verify)
    verify.set_defaults(handler=cmd_verify)

    serve = sub.add_parser("serve", help="Start the JSON API.")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.set_defaults(handler=cmd_serve)
    return parser


def _apply_overrides(args: argparse.Namespace) -> None:
    if args.tol is not None:
        os.environ["LINSTARK_TOL"] = repr(args.tol)
    if args.log_level is not None:
        os.environ["LINSTARK_LOG_LEVEL"] = args.log_level
    get_settings.cache_clear()
    logging.basicConfig(
        level=get_settings().log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_overrides(args)
        return args.handler(args)
    except LinstarkError as exc:
        print(f"error: {exc.error_type}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValidationError as exc:
        print(f"error: invalid_parameter: {exc.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
