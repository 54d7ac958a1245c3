"""Command-line entry point: ``flatband run <config>`` and ``flatband list``."""

import argparse
import json
import sys
from typing import Optional, Sequence

from src.errors import ConfigInvalid, ExperimentFailed, InputError
from src.experiments.config import load_config
from src.experiments.registry import list_experiments
from src.experiments.runner import run
from src.utils.logging import setup_logging

logger = setup_logging(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatband",
        description="Driven-dissipative flat-band lattice experiments",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Run the experiment described by a config file")
    run_parser.add_argument("config", help="Key-value config file or a previous run_manifest.json")
    run_parser.add_argument("--output-dir", help="Directory for the CSV and JSON artifacts")
    run_parser.add_argument(
        "--convention",
        choices=["natural", "log10"],
        help="Logarithm used for decay lengths",
    )

    commands.add_parser("list", help="List the available experiments")
    return parser


def format_listing() -> str:
    """Alphabetized experiment listing, one block per experiment."""
    blocks = []
    for entry in list_experiments():
        blocks.append(
            f"{entry.name}\n"
            f"    {entry.description}\n"
            f"    reproduces: {entry.reproduces}\n"
            f"    required: {', '.join(entry.required_keys) or '-'}\n"
            f"    optional: {', '.join(entry.optional_keys) or '-'}\n"
        )
    return "".join(blocks)


def _report(kind: str, error: BaseException, exit_code: int) -> int:
    report = {"error": kind, "type": type(error).__name__, "message": str(error), "exit": exit_code}
    if isinstance(error, ExperimentFailed):
        report["experiment"] = error.experiment
    if error.__cause__ is not None:
        report["cause"] = type(error.__cause__).__name__
    print(json.dumps(report, sort_keys=True), file=sys.stderr)
    return exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments and dispatch.

    Returns:
        0 on success, 2 for config errors, 3 for numerical failures, 4 for I/O errors
    """
    args = build_parser().parse_args(argv)

    if args.command == "list":
        sys.stdout.write(format_listing())
        return EXIT_OK

    try:
        config = load_config(args.config)
        outcome = run(config, output_dir=args.output_dir, convention=args.convention)
    except ConfigInvalid as e:
        return _report("config", e, EXIT_CONFIG)
    except ExperimentFailed as e:
        if isinstance(e.__cause__, OSError):
            return _report("io", e, EXIT_IO)
        return _report("numeric", e, EXIT_NUMERIC)
    except InputError as e:
        return _report("config", e, EXIT_CONFIG)
    except OSError as e:
        return _report("io", e, EXIT_IO)

    for path in outcome.files:
        print(path)
    return EXIT_OK
