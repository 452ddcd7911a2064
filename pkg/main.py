"""
Main entry point for the Octupolar command-line tool.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import numpy as np

from config.settings import ConfigError, dump_settings, load_settings
from config.version import __version__
from core.errors import OctupolarError
from services import AnalysisService, GroupService, OperationResult, SeparatrixService, SweepService
from services.app_logging import configure_console_logging


def parse_values(spec: str) -> list[float]:
    """'start:stop:n' for n evenly spaced values, or a comma-separated list."""
    spec = spec.strip()
    if not spec:
        return []
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"expected start:stop:n, got {spec!r}")
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 0:
            raise argparse.ArgumentTypeError(f"negative sample count in {spec!r}")
        return [float(v) for v in np.linspace(start, stop, n)]
    try:
        return [float(v) for v in spec.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_input_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--cylinder", nargs=3, type=float, metavar=("K", "RHO", "CHI"), help="oriented parameters")
    group.add_argument(
        "--raw",
        nargs=7,
        type=float,
        metavar=("A0", "A1", "A2", "A3", "B1", "B2", "B3"),
        help="the seven independent components alpha0..alpha3, beta1..beta3",
    )
    group.add_argument("--tensor-file", metavar="PATH", help="JSON file with 'components' or 'array'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="octupolar", description="Classification of octupolar tensors in 3D.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", metavar="PATH", help="key = value settings file")
    parser.add_argument("--verbose", action="store_true", help="debug logging to stderr")
    parser.add_argument("--degrees", action="store_true", help="angles in degrees for input, tables and CSV")
    parser.add_argument("--show-config", action="store_true", help="print the effective settings and exit")

    sub = parser.add_subparsers(dest="command")

    analyze = sub.add_parser("analyze", help="all critical points of one tensor")
    _add_input_arguments(analyze)
    analyze.add_argument("--json", metavar="PATH", help="also write the report as JSON")

    phase = sub.add_parser("phase", help="one-line phase and symmetry label")
    _add_input_arguments(phase)

    oracle = sub.add_parser("oracle", help="brute-force dense-grid spectrum")
    _add_input_arguments(oracle)
    oracle.add_argument("--n-lat", type=int, default=256)
    oracle.add_argument("--n-lon", type=int, default=512)
    oracle.add_argument("--json", metavar="PATH")

    sweep = sub.add_parser("sweep", help="phase counts on a parameter grid")
    sweep.add_argument("--k", type=parse_values, required=True, metavar="SPEC")
    sweep.add_argument("--rho", type=parse_values, required=True, metavar="SPEC")
    sweep.add_argument("--chi", type=parse_values, required=True, metavar="SPEC")
    sweep.add_argument("--output", required=True, metavar="CSV")
    sweep.add_argument("--checkpoint", metavar="PATH", help="defaults to <output>.checkpoint.jsonl")
    sweep.add_argument("--workers", type=int)

    separatrix = sub.add_parser("separatrix", help="trace the separatrix surface")
    separatrix.add_argument("--chi", type=parse_values, metavar="SPEC", help="defaults to surface_chi")
    separatrix.add_argument("--rho", type=parse_values, metavar="SPEC", help="defaults to section_rho")
    separatrix.add_argument("--output-dir", required=True, metavar="DIR")
    separatrix.add_argument("--workers", type=int)

    plotdata = sub.add_parser("plotdata", help="contour grid or polar mesh of the potential")
    _add_input_arguments(plotdata)
    plotdata.add_argument("--kind", choices=("contour", "polar"), default="contour")
    plotdata.add_argument("--resolution", type=int, default=90)
    plotdata.add_argument("--output", required=True, metavar="CSV")

    group = sub.add_parser("group", help="tetrahedral group matrices, table and subgroups")
    group.add_argument("--verify", action="store_true", help="recompute the table and diff against the listing")
    return parser


def _resolve(service: AnalysisService, args, allow_zero: bool = False):
    return service.resolve_params(
        cylinder=tuple(args.cylinder) if args.cylinder else None,
        raw=args.raw,
        tensor_file=args.tensor_file,
        degrees=args.degrees,
        allow_zero=allow_zero,
    )


def _print_progress(percent: int) -> None:
    print(f"\r[{percent:3d}%]", end="", file=sys.stderr, flush=True)
    if percent >= 100:
        print(file=sys.stderr)


def run_command(args, cfg) -> OperationResult:
    log = print if args.verbose else None

    if args.command == "group":
        service = GroupService()
        return service.verify() if args.verify else service.describe()

    if args.command == "sweep":
        chi = [math.radians(c) for c in args.chi] if args.degrees else args.chi
        return SweepService(cfg).run(
            args.k,
            args.rho,
            chi,
            args.output,
            checkpoint_path=args.checkpoint,
            workers=args.workers,
            degrees=args.degrees,
            log_callback=log,
            progress_callback=_print_progress if args.verbose else None,
        )

    if args.command == "separatrix":
        chi = args.chi
        if chi is not None and args.degrees:
            chi = [math.radians(c) for c in chi]
        return SeparatrixService(cfg).run(
            args.output_dir,
            chi_values=chi,
            rho_values=args.rho,
            workers=args.workers,
            degrees=args.degrees,
            log_callback=log,
            progress_callback=_print_progress if args.verbose else None,
        )

    service = AnalysisService(cfg)
    request = _resolve(service, args, allow_zero=args.command == "plotdata")
    if args.command == "analyze":
        result = service.analyze(request, json_path=args.json, degrees=args.degrees, log_callback=log)
        if result.success:
            print(result.details["table"])
        return result
    if args.command == "phase":
        return service.phase(request)
    if args.command == "oracle":
        result = service.oracle(request, n_lat=args.n_lat, n_lon=args.n_lon, json_path=args.json, degrees=args.degrees)
        if result.success:
            print(result.details["table"])
        return result
    return service.plotdata(request, args.kind, args.resolution, args.output, degrees=args.degrees, log_callback=log)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_settings(args.config)
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 2

    if args.verbose:
        configure_console_logging("DEBUG")
    if args.show_config:
        print(dump_settings(cfg), end="")
        return 0
    if not args.command:
        parser.print_help()
        return 2

    try:
        result = run_command(args, cfg)
    except (OctupolarError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return 130

    print(result.message, file=sys.stdout if result.success else sys.stderr)
    return 0 if result.success else 1


if __name__ == "__main__":
    sys.exit(main())
