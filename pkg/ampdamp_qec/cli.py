"""Command-line front end.

Subcommands cover the code catalog, Knill-Laflamme checks, damped subspaces,
fidelity sweeps and comparisons, syndrome contributions, recovery tables and
circuit emission. Exit status is 0 on success, 2 on usage errors and 1 when a
computation fails.
"""
from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from . import __version__
from .api._enums import CircuitKind, GammaSpacing, OutputFormat
from .api._exceptions import QECError, QECUsageError
from .api._requests import GammaRange, RunConfig
from .api._responses import CSV_COLUMNS, FidelityCurve, FidelityPoint, format_number
from .api.circuits import (
    build_encoding_circuit,
    build_recovery_circuit,
    build_syndrome_circuit,
    emit_text,
)
from .api.codes import ParityCheckMatrix, from_parity_check, get_code, list_codes, parse_selector
from .api.damping import damping_error_products
from .api.fidelity import baseline_unencoded, resolve_truncation, syndrome_contributions
from .api.recovery import build_recovery, check_mode
from .api.stabilizer import check_knill_laflamme, damped_subspace_set
from .client import SweepClient
from .config import config

logger = logging.getLogger(__name__)

UNTRUNCATED = "none"


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports errors as usage exceptions."""

    def error(self, message: str) -> NoReturn:
        raise QECUsageError(message)


def _qubit_list(text: str) -> List[int]:
    try:
        return sorted({int(part) for part in text.split(",") if part.strip()})
    except ValueError:
        raise QECUsageError(f"Expected comma separated qubit indices, got '{text}'")


def _truncation_order(text: str) -> Union[int, str]:
    """Damping order for --truncate: a non-negative integer or "none" for the full channel."""
    if text.strip().lower() == UNTRUNCATED:
        return UNTRUNCATED
    try:
        order = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an order or 'none', got '{text}'")
    if order < 0:
        raise argparse.ArgumentTypeError(f"order must be non-negative, got {order}")
    return order


def _truncation(args: argparse.Namespace) -> Tuple[Optional[int], bool]:
    """(order, exact) from --truncate and --exact; "none" is the same as --exact."""
    if args.truncate == UNTRUNCATED:
        return None, True
    return args.truncate, args.exact


def _add_gamma_range(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma-min", type=float, default=0.0)
    parser.add_argument("--gamma-max", type=float, default=0.3)
    parser.add_argument("--steps", type=int, default=31)
    parser.add_argument(
        "--spacing", choices=[s.value for s in GammaSpacing], default=GammaSpacing.LINEAR.value
    )
    parser.add_argument(
        "--truncate", type=_truncation_order, default=None,
        help="Highest damping order kept, or 'none' for the full channel",
    )
    parser.add_argument("--exact", action="store_true", help="Same as --truncate none")
    parser.add_argument("--out", type=Path, default=None, help="Output file, stdout if omitted")
    parser.add_argument(
        "--format", dest="output_format", choices=[f.value for f in OutputFormat],
        default=OutputFormat.CSV.value,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ampdamp-qec", description="Amplitude damping code toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    codes = commands.add_parser("codes", help="Code catalog")
    codes_commands = codes.add_subparsers(dest="action", required=True, parser_class=_Parser)
    codes_commands.add_parser("list")
    show = codes_commands.add_parser("show")
    show.add_argument("name")
    parity = codes_commands.add_parser("from-parity-check")
    source = parity.add_mutually_exclusive_group(required=True)
    source.add_argument("--matrix", help="Rows separated by ';', e.g. '1110;0111'")
    source.add_argument("--file", type=Path)
    parity.add_argument("--name", default="")

    kl = commands.add_parser("kl-check", help="Knill-Laflamme check")
    kl.add_argument("--code", required=True)
    kl.add_argument("--errors", default="dampings:1", help="dampings:<order>")
    kl.add_argument("--gamma", type=float, default=1.0)
    kl.add_argument("--tol", type=float, default=None)

    damped = commands.add_parser("damped-subspace", help="Stabilizer of a damped code space")
    damped.add_argument("--code", required=True)
    damped.add_argument("--qubits", required=True)

    fidelity = commands.add_parser("fidelity", help="Fidelity curve of one code")
    fidelity.add_argument("--code", required=True)
    fidelity.add_argument("--recovery", default=None, help="Recovery mode, default per code")
    _add_gamma_range(fidelity)

    compare = commands.add_parser("compare", help="Fidelity curves of several codes")
    compare.add_argument(
        "--codes", required=True,
        help="Comma separated selectors with an optional @mode, e.g. pair:2,leung41^2,gottesman83@adapted_stabilizer",
    )
    compare.add_argument(
        "--recovery", default=None, help="Mode for selectors without @mode, default per code"
    )
    compare.add_argument("--normalize", action="store_true")
    _add_gamma_range(compare)

    contributions = commands.add_parser("contributions", help="Fidelity by damping order")
    contributions.add_argument("--code", required=True)
    contributions.add_argument("--recovery", default=None)
    contributions.add_argument("--gamma", type=float, required=True)
    contributions.add_argument("--truncate", type=_truncation_order, default=None)
    contributions.add_argument("--exact", action="store_true")

    emit = commands.add_parser("emit-circuit", help="Write a circuit in text form")
    emit.add_argument("--code", required=True)
    emit.add_argument("--kind", required=True, help="encode, syndrome:<stage> or recovery")
    emit.add_argument("--damped", default=None)
    emit.add_argument("--out", type=Path, default=None)

    recovery = commands.add_parser("recovery", help="Recovery operations")
    recovery_commands = recovery.add_subparsers(dest="action", required=True, parser_class=_Parser)
    recovery_show = recovery_commands.add_parser("show")
    recovery_show.add_argument("--code", required=True)
    recovery_show.add_argument("--mode", default=None)
    recovery_show.add_argument("--gamma", type=float, default=None)
    return parser


def _write(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _run_config(args: argparse.Namespace, codes: List[str]) -> RunConfig:
    truncation, exact = _truncation(args)
    try:
        return RunConfig(
            command=args.command,
            codes=codes,
            recovery_mode=args.recovery,
            gamma_range=GammaRange(
                gamma_min=args.gamma_min,
                gamma_max=args.gamma_max,
                steps=args.steps,
                spacing=args.spacing,
            ),
            truncation=truncation,
            exact=exact,
            normalize=getattr(args, "normalize", False),
            out=args.out,
            output_format=args.output_format,
        )
    except ValidationError as e:
        error = e.errors()[0]
        where = ".".join(str(part) for part in error["loc"])
        raise QECUsageError(f"{where}: {error['msg']}" if where else error["msg"]) from e


def render_points(
    points: Sequence[FidelityPoint], output_format: OutputFormat, run: Optional[RunConfig] = None
) -> str:
    """CSV (fixed columns and digits) or JSON with the contribution breakdown.

    JSON output is an object with the run configuration under ``run`` and the
    rows under ``points``.
    """
    digits = config.significant_digits
    if output_format == OutputFormat.JSON:
        records = []
        for point in points:
            record: Dict[str, Any] = point.model_dump(mode="json")
            record["contributions"] = {
                str(order): value for order, value in sorted(point.contributions.items())
            }
            records.append(record)
        document = {"run": run.to_record() if run is not None else {}, "points": records}
        return json.dumps(document, indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for point in points:
        writer.writerow(point.to_row(digits))
    return buffer.getvalue()


def _baseline_points(curves: Sequence[FidelityCurve], normalize: bool) -> List[FidelityPoint]:
    ks = [1] if normalize else sorted({curve.k for curve in curves})
    gammas = curves[0].gammas if curves else []
    return [
        FidelityPoint(
            gamma=gamma,
            code=f"unencoded:{k}",
            recovery_mode="none",
            k=k,
            fidelity=baseline_unencoded(k, gamma),
            normalized_fidelity=baseline_unencoded(1, gamma),
        )
        for k in ks
        for gamma in gammas
    ]


# Commands


def _codes(args: argparse.Namespace) -> int:
    if args.action == "list":
        for name, description in list_codes():
            print(f"{name}\t{description}")
        return 0
    if args.action == "show":
        code = get_code(args.name)
    else:
        text = args.matrix.replace(";", "\n") if args.matrix else args.file.read_text(encoding="utf-8")
        code = from_parity_check(ParityCheckMatrix.from_text(text), args.name)
    print(f"{code.name} [{code.n},{code.k}]")
    for row in code.table():
        print(row)
    return 0


def _kl_check(args: argparse.Namespace) -> int:
    kind, _, order = args.errors.partition(":")
    if kind != "dampings" or not order.isdigit():
        raise QECUsageError(f"Unknown error set '{args.errors}', expected dampings:<order>")
    code = get_code(args.code)
    errors = damping_error_products(code.n, args.gamma, int(order))
    report = check_knill_laflamme(code, errors, args.tol)
    print(report.summary())
    return 0 if report.correctable else 1


def _damped_subspace(args: argparse.Namespace) -> int:
    code = get_code(args.code)
    group = damped_subspace_set(code.group, _qubit_list(args.qubits))
    print(" / ".join(str(g) for g in group))
    return 0


def _fidelity(args: argparse.Namespace) -> int:
    run = _run_config(args, [args.code])
    check_mode(parse_selector(args.code)[0], run.recovery_mode)

    async def go() -> FidelityCurve:
        async with SweepClient() as client:
            return await client.sweep_code(
                args.code, run.recovery_mode, run.gamma_range.grid(), run.truncation, run.exact
            )

    curve = asyncio.run(go())
    _write(render_points(curve.rows, run.output_format, run), run.out)
    return 0


def _compare(args: argparse.Namespace) -> int:
    selectors = [part.strip() for part in args.codes.split(",") if part.strip()]
    run = _run_config(args, selectors)

    async def go() -> List[FidelityCurve]:
        async with SweepClient() as client:
            return await client.compare(
                run.codes, run.recovery_mode, run.gamma_range.grid(), run.truncation, run.exact
            )

    curves = asyncio.run(go())
    points = [point for curve in curves for point in curve]
    points += _baseline_points(curves, run.normalize)
    _write(render_points(points, run.output_format, run), run.out)
    return 0


def _contributions(args: argparse.Namespace) -> int:
    name, _ = parse_selector(args.code)
    mode = check_mode(name, args.recovery)
    code = get_code(name)
    recovery = build_recovery(name, mode.value, args.gamma)
    order = resolve_truncation(code.n, *_truncation(args))
    report = syndrome_contributions(code, recovery, args.gamma, order)
    digits = config.significant_digits
    print("order,contribution")
    for damping_order, value in sorted(report.by_order.items()):
        print(f"{damping_order},{format_number(value, digits)}")
    print(f"total,{format_number(report.total, digits)}")
    return 0


def _pair_m(name: str) -> int:
    if name == "leung41":
        return 1
    if name.startswith("pair:"):
        return int(name.split(":")[1])
    raise QECUsageError(f"Code '{name}' has no encoding or recovery circuit")


def _emit_circuit(args: argparse.Namespace) -> int:
    name, _ = parse_selector(args.code)
    get_code(name)
    kind, _, stage = args.kind.partition(":")
    try:
        kind = CircuitKind(kind)
    except ValueError:
        raise QECUsageError(f"Unknown circuit kind '{args.kind}'")
    if kind == CircuitKind.ENCODE:
        circuit = build_encoding_circuit(_pair_m(name))
    elif kind == CircuitKind.SYNDROME:
        if not stage:
            raise QECUsageError("Syndrome circuits need a stage, e.g. syndrome:z_pairs")
        circuit = build_syndrome_circuit(name, stage)
    else:
        if args.damped is None:
            raise QECUsageError("Recovery circuits need --damped")
        circuit = build_recovery_circuit(_pair_m(name), _qubit_list(args.damped))
    _write(emit_text(circuit), args.out)
    return 0


def _recovery(args: argparse.Namespace) -> int:
    name, _ = parse_selector(args.code)
    mode = check_mode(name, args.mode)
    operation = build_recovery(name, mode.value, args.gamma)
    gamma = "" if operation.gamma is None else f" gamma={operation.gamma:g}"
    print(f"{operation.code} mode={operation.mode.value}{gamma} elements={len(operation)}")
    for outcome in operation.syndrome_table():
        measured = " ".join(f"{op}={'+' if sign > 0 else '-'}1" for op, sign in outcome.measured)
        print(
            f"{outcome.label}\tdim={outcome.residual_dim}\t"
            f"correction={outcome.correction or 'I'}\t{measured}"
        )
    print(f"completeness_deficit {operation.completeness_deficit():.3e}")
    return 0


_COMMANDS = {
    "codes": _codes,
    "kl-check": _kl_check,
    "damped-subspace": _damped_subspace,
    "fidelity": _fidelity,
    "compare": _compare,
    "contributions": _contributions,
    "emit-circuit": _emit_circuit,
    "recovery": _recovery,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and run the subcommand, returning the exit status."""
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(
            level="DEBUG" if args.verbose else config.effective_log_level,
            format="%(asctime)s %(name)s %(levelname)s %(message)s",
        )
        return _COMMANDS[args.command](args)
    except QECError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> NoReturn:
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "render_points"]
