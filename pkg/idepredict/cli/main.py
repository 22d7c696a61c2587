"""
Command-line entry point.

Usage::

    idepredict validate --config builtin:frequency
    idepredict sweep --config scenario.ini --seed 7 --out results/sweep.csv
    idepredict list-scenarios

CSV goes to stdout or ``--out``; logs go to stderr.
"""

import argparse
import sys
from typing import List, Optional

from ..utilities.error_handler import ErrorCategorizer, handle_errors
from ..utilities.logger_utils import (
    LogLevel, configure_logging, correlation_id, get_logger, log_performance
)
from .commands import (
    cmd_bounds, cmd_list_scenarios, cmd_montecarlo, cmd_predict, cmd_sweep, cmd_validate
)
from .config import load_config

TABLE_COMMANDS = {
    "predict": (cmd_predict, "Predicted MSE per SNR"),
    "bounds": (cmd_bounds, "Requested lower bounds per SNR"),
    "montecarlo": (cmd_montecarlo, "Empirical MSE per SNR (needs a seed)"),
    "sweep": (cmd_sweep, "Prediction, bounds and Monte Carlo joined on snr_db"),
}


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True,
                        help="Scenario file, or builtin:<kind> for a shipped scenario")
    common.add_argument("--out", help="Write the CSV here instead of stdout")
    common.add_argument("--seed", type=_seed, help="Monte Carlo seed (overrides the file)")
    common.add_argument("--runs", type=int, help="Monte Carlo runs per SNR")
    common.add_argument("--threads", type=int, help="Monte Carlo worker threads")
    common.add_argument("--tol-abs", type=float, help="Absolute quadrature tolerance")
    common.add_argument("--tol-rel", type=float, help="Relative quadrature tolerance")

    parser = argparse.ArgumentParser(
        prog="idepredict",
        description="MSE prediction for implicitly defined estimators")
    parser.add_argument("--log-level", default="WARNING",
                        choices=[level.name for level in LogLevel],
                        help="Logging level (default: WARNING)")
    parser.add_argument("--log-json", action="store_true", help="Emit logs as JSON lines")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("validate", parents=[common],
                          help="Check a scenario file and print the resolved settings")
    for name, (_, help_text) in TABLE_COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=help_text)
    subparsers.add_parser("list-scenarios", help="List the built-in scenario kinds")
    return parser


@handle_errors("cli")
def dispatch(args: argparse.Namespace) -> str:
    if args.command == "list-scenarios":
        return cmd_list_scenarios()
    config = load_config(args.config).with_overrides(
        seed=args.seed, runs=args.runs, threads=args.threads,
        tol_abs=args.tol_abs, tol_rel=args.tol_rel)
    if args.command == "validate":
        return cmd_validate(config)
    command, _ = TABLE_COMMANDS[args.command]
    text = command(config, args.out)
    return "" if args.out else text


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI.

    Returns:
        int: 0 on success, 2 for configuration errors, 3 for quadrature
        convergence failures, 1 for anything else
    """
    args = build_parser().parse_args(argv)
    configure_logging(level=LogLevel[args.log_level].value, use_json_formatter=args.log_json)
    # library loggers are named per class and propagate to the root
    get_logger("")
    timed = log_performance(get_logger(__name__))(dispatch)
    with correlation_id():
        try:
            output = timed(args)
        except Exception as error:
            category = ErrorCategorizer.categorize_error(error)
            print(f"error: {error}", file=sys.stderr)
            return category.exit_code
    if output:
        sys.stdout.write(output)
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
