import argparse
import logging
import sys
from typing import List, Optional

from rich.logging import RichHandler

from .cli import (
    EXIT_ERROR,
    EXIT_OK,
    cmd_analyze,
    cmd_netlist,
    cmd_simulate,
    cmd_structure,
    cmd_verify,
)
from .config import REPORT_FORMATS, load_config
from .exceptions import HarmsyncError, SchemaError
from .utils import console, logger


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmsync",
        description="harmsync - synchronization analysis of coupled harmonic oscillators"
    )
    parser.add_argument(
        "-c", "--config",
        help="Path to configuration file (JSON or YAML)"
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable verbose logging"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def add_overrides(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--m0", type=float, help="Override oscillator inertia m0")
        sub.add_argument("--k0", type=float, help="Override oscillator stiffness k0")

    analyze = commands.add_parser("analyze", help="Decide synchronization of a network")
    analyze.add_argument("network", help="Network JSON file ('-' for stdin)")
    add_overrides(analyze)
    analyze.add_argument("--format", choices=REPORT_FORMATS, help="Report format (default from config)")

    structure = commands.add_parser("structure", help="Report graph connectivity and edge isolation")
    structure.add_argument("network", help="Network JSON file ('-' for stdin)")
    add_overrides(structure)

    netlist = commands.add_parser("netlist", help="Convert an RLC netlist to network JSON")
    netlist.add_argument("netlist", help="Netlist JSON file ('-' for stdin)")

    sim = commands.add_parser("simulate", help="Integrate the network and classify the trajectory")
    sim.add_argument("network", help="Network JSON file ('-' for stdin)")
    add_overrides(sim)
    start = sim.add_mutually_exclusive_group()
    start.add_argument("--x0", type=_float_list, help="Initial positions, comma-separated")
    start.add_argument("--witness", action="store_true", help="Start from the persistent kernel mode")
    sim.add_argument("--v0", type=_float_list, help="Initial velocities, comma-separated")
    sim.add_argument("--dt", type=float, help="Time step in seconds (default: stability cap)")
    sim.add_argument("--t-end", type=float, help="Horizon in seconds")
    sim.add_argument("--stride", type=int, help="Record every n-th step")
    sim.add_argument("--seed", type=int, help="Seed for the random initial positions")
    sim.add_argument("--out", default="trajectory.csv", help="CSV output path (default: trajectory.csv)")

    verify = commands.add_parser("verify", help="Run randomized cross-checks between all tests")
    verify.add_argument("--samples", type=int, help="Random instances per check")
    verify.add_argument("--seed", type=int, help="Seed for the instance generator")
    return parser


def _pick(value, default):
    return default if value is None else value


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the program."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse has already printed usage; --help exits with 0
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR

    logging.basicConfig(
        level=logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True)]
    )

    try:
        config = load_config(args.config)
        logger.setLevel(logging.DEBUG if args.verbose else config["LOG_LEVEL"])
        digits = config["FLOAT_DIGITS"]
        progress = config["SHOW_PROGRESS"]

        if args.command == "analyze":
            return cmd_analyze(args.network, args.m0, args.k0,
                               report_format=_pick(args.format, config["REPORT_FORMAT"]), digits=digits)
        if args.command == "structure":
            return cmd_structure(args.network, args.m0, args.k0, digits=digits)
        if args.command == "netlist":
            return cmd_netlist(args.netlist, digits=digits)
        if args.command == "simulate":
            return cmd_simulate(
                args.network, args.out, x0=args.x0, v0=args.v0, witness=args.witness,
                dt=_pick(args.dt, config["SIM_DT"]),
                t_end=_pick(args.t_end, config["SIM_T_END"]),
                record_stride=_pick(args.stride, config["SIM_RECORD_STRIDE"]),
                seed=_pick(args.seed, config["SIM_SEED"]),
                m0=args.m0, k0=args.k0, digits=digits, progress=progress,
            )
        return cmd_verify(
            samples=_pick(args.samples, config["VERIFY_SAMPLES"]),
            seed=_pick(args.seed, config["VERIFY_SEED"]),
            digits=digits, progress=progress,
        )

    except FileNotFoundError as e:
        logger.error(f"Error: {e}")
        return EXIT_ERROR
    except SchemaError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_ERROR
    except HarmsyncError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
