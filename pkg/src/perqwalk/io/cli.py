"""
Command line front end.

    perqwalk evolve      --size 15x15 --coin grover --mode unitary --steps 1000 --initial "7,7:@uniform"
    perqwalk asymptotic  --lattice 15x16:periodic,periodic --initial "7,7:L=0.70710678118654752,D=0.70710678118654752"
    perqwalk attractors  --lattice 4x4:open,open --coin hadamard2d
    perqwalk validate    oracle

Result data goes to --out (or stdout); logs and summaries go to stderr.
Exit codes: 0 ok, 1 validation failure, 2 bad input, 3 guard, 4 certification.
"""
from __future__ import annotations

import argparse
import logging
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from perqwalk import __version__
from perqwalk.config.settings import get_settings
from perqwalk.errors import ConfigError, NotOrthonormalError, PerqwalkError, ValidationFailure
from perqwalk.experiments.run_config import RunConfig, lattice_from_parts
from perqwalk.experiments.runner import ExperimentRunner, run_command
from perqwalk.io.persistence import (
    AttractorReportRecord,
    CheckRecord,
    DistributionRecord,
    ValidationRecord,
    write_json,
    write_result,
)
from perqwalk.utils.tracing import trace_summary
from perqwalk.validation.suites import SUITE_NAMES, run_suites
from perqwalk.walk.coin import COIN_KINDS


logger = logging.getLogger("perqwalk.cli")

_stderr = Console(stderr=True)


# ---- Parser -----------------------------------------------------------------


def _run_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    lattice = common.add_argument_group("lattice")
    lattice.add_argument("--size", help="MxN, e.g. 15x16")
    lattice.add_argument("--boundary-s", default="periodic", help="periodic | open (default: periodic)")
    lattice.add_argument("--boundary-t", default="periodic", help="periodic | open (default: periodic)")
    lattice.add_argument("--lattice", help='alternative to --size/--boundary-*: "MxN:<b_s>,<b_t>"')

    walk = common.add_argument_group("walk")
    walk.add_argument("--coin", default=None, choices=COIN_KINDS, help="coin (default: hadamard2d)")
    walk.add_argument("--coin-file", help="JSON 4x4 array of [re, im] pairs; implies --coin custom")
    walk.add_argument("--p", type=float, default=0.5, help="edge probability (default: 0.5)")
    walk.add_argument("--steps", type=int, default=0, help="steps, or the phase index t for asymptotic runs")
    walk.add_argument("--initial", default=None, help='"s,t:L=..,D=..,U=..,R=.." or "s,t:@uniform"')

    engine = common.add_argument_group("engine")
    engine.add_argument("--mode", choices=("exact", "mc", "unitary", "asymptotic"))
    engine.add_argument("--method", default="auto", choices=("eq5", "fastpath", "auto"))
    engine.add_argument("--trials", type=int, default=1000, help="Monte Carlo trajectories")
    engine.add_argument("--seed", type=int, default=0, help="Monte Carlo master seed")

    output = common.add_argument_group("output")
    output.add_argument("--out", help="result file (default: stdout)")
    output.add_argument("--format", default="json", choices=("json", "csv"))
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perqwalk",
        description="Coined quantum walks on dynamically percolated 2D lattices.",
    )
    parser.add_argument("--version", action="version", version=f"perqwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _run_options()

    sub.add_parser("evolve", parents=[common], help="position distribution after a number of steps")
    asymptotic = sub.add_parser("asymptotic", parents=[common], help="asymptotic position distribution")
    asymptotic.add_argument("--basis-out", help="also write the attractor basis as JSON")
    sub.add_parser("attractors", parents=[common], help="attractor-space dimension report")

    validate = sub.add_parser("validate", help="run a property suite")
    validate.add_argument("suite", nargs="?", default="all", choices=SUITE_NAMES)
    validate.add_argument("--out", help="report file (default: stdout)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.lattice and args.size:
        raise ConfigError("give either --lattice or --size/--boundary-s/--boundary-t, not both")
    if args.lattice:
        lattice = args.lattice
    elif args.size:
        lattice = lattice_from_parts(args.size, args.boundary_s, args.boundary_t)
    else:
        raise ConfigError("a lattice is required: --size MxN or --lattice MxN:<b_s>,<b_t>")

    fields: Dict[str, Any] = {
        "lattice": lattice,
        "p": args.p,
        "steps": args.steps,
        "method": args.method,
        "trials": args.trials,
        "seed": args.seed,
        "out": args.out,
        "format": args.format,
    }
    if args.coin_file:
        fields["coin"] = args.coin or "custom"
        fields["coin_file"] = args.coin_file
    elif args.coin:
        fields["coin"] = args.coin
    if args.initial is not None:
        fields["initial"] = args.initial
    if args.mode is not None:
        fields["mode"] = args.mode
    elif args.command == "asymptotic":
        fields["mode"] = "asymptotic"
    return RunConfig(**fields)


# ---- Summaries --------------------------------------------------------------


def _summarize_distribution(record: DistributionRecord) -> None:
    probs = record.probabilities
    s, t = max(
        ((i, j) for i in range(len(probs)) for j in range(len(probs[0]))),
        key=lambda ij: probs[ij[0]][ij[1]],
    )
    meta = record.metadata
    line = f"[bold]{meta.command}[/bold] {meta.lattice} {meta.coin} p={meta.p:g} mode={meta.mode}: peak P({s},{t}) = {probs[s][t]:.6g}"
    if record.attractor_dimension is not None:
        line += f", attractor dim {record.attractor_dimension} ({record.attractor_status}, {record.method_used})"
    _stderr.print(line)


def _summarize_attractors(record: AttractorReportRecord) -> None:
    table = Table(title=f"attractors {record.metadata.lattice} {record.metadata.coin}")
    table.add_column("analytic")
    table.add_column("numeric")
    table.add_column("general")
    table.add_column("match")
    table.add_row(
        str(record.analytic_count),
        str(record.numeric_count),
        str(record.general_count),
        "yes" if record.match else "[red]no[/red]",
    )
    _stderr.print(table)


def _summarize_validation(record: ValidationRecord) -> None:
    passed = sum(c.passed for c in record.checks)
    style = "green" if record.passed else "red"
    _stderr.print(f"[{style}]{passed}/{len(record.checks)} checks passed[/{style}] ({', '.join(record.suites)})")
    for check in record.checks:
        if not check.passed:
            _stderr.print(f"  [red]FAIL[/red] {check.suite}/{check.invariant} on {check.instance}: {check.value:.3e} > {check.tol:.1e}")


# ---- Commands ---------------------------------------------------------------


def _run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    record = run_command(args.command, config)
    write_result(record, config.format, config.out)
    if isinstance(record, DistributionRecord):
        _summarize_distribution(record)
    else:
        _summarize_attractors(record)
    return 0


def cmd_evolve(args: argparse.Namespace) -> int:
    return _run(args)


def cmd_asymptotic(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    runner = ExperimentRunner(config)
    record = runner.run_asymptotic()
    write_result(record, config.format, config.out)
    if args.basis_out:
        write_json(runner.attractor_basis().to_json(), args.basis_out)
    _summarize_distribution(record)
    return 0


def cmd_attractors(args: argparse.Namespace) -> int:
    return _run(args)


def cmd_validate(args: argparse.Namespace) -> int:
    report = run_suites(args.suite)
    record = ValidationRecord(
        suites=report.suites,
        passed=report.passed,
        checks=[CheckRecord(**vars(c)) for c in report.checks],
        tool_version=__version__,
    )
    write_result(record, "json", args.out)
    _summarize_validation(record)
    if not report.passed:
        first = report.failures[0]
        raise ValidationFailure(
            f"{len(report.failures)} check(s) failed, first: {first.suite}/{first.invariant} on {first.instance}"
        )
    return 0


COMMANDS = {
    "evolve": cmd_evolve,
    "asymptotic": cmd_asymptotic,
    "attractors": cmd_attractors,
    "validate": cmd_validate,
}


def _print_timings() -> None:
    table = Table(title="timings")
    table.add_column("block")
    table.add_column("calls", justify="right")
    table.add_column("total [s]", justify="right")
    table.add_column("slowest [s]", justify="right")
    for name, stats in trace_summary():
        table.add_row(name, str(stats.calls), f"{stats.seconds:.3f}", f"{stats.slowest:.3f}")
    _stderr.print(table)


def _configure_logging(debug: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=_stderr, show_path=False)],
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    try:
        debug = get_settings().debug
        _configure_logging(debug)
        code = COMMANDS[args.command](args)
        if debug:
            _print_timings()
        return code
    except ValidationError as exc:
        _stderr.print(f"[red]invalid configuration:[/red] {_pydantic_message(exc)}")
        return ConfigError.exit_code
    except PerqwalkError as exc:
        _stderr.print(f"[red]error:[/red] {exc}")
        return exc.exit_code
    except NotOrthonormalError as exc:
        _stderr.print(f"[red]error:[/red] {exc}")
        return 4
    except ValueError as exc:
        _stderr.print(f"[red]invalid input:[/red] {exc}")
        return ConfigError.exit_code


def _pydantic_message(exc: ValidationError) -> str:
    parts: List[str] = []
    for err in exc.errors():
        loc = ".".join(str(x) for x in err.get("loc", ())) or "config"
        parts.append(f"{loc}: {err.get('msg')}")
    return "; ".join(parts)
