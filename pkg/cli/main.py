#!/usr/bin/env python3
"""
sir-exact command line.

Exit codes: 0 success, 2 invalid input or configuration, 3 numerical or scheme failure.
"""

import argparse
import sys
from functools import wraps
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError as PydanticValidationError
from rich.console import Console

from analysis.equilibrium import DEFAULT_ALPHA_TOL, DEFAULT_MAX_ITER
from analysis.sweep import MAX_CELLS, METRICS
from cli.commands import cmd_classify, cmd_compare, cmd_exact, cmd_simulate, cmd_sweep
from cli.config import RUN_KEYS, SWEEP_KEYS, RunConfig, SweepConfig, merge_settings
from models.types import Scheme
from utils.exceptions import ConfigurationError, SirExactError, ValidationError
from utils.helpers import load_config
from utils.logger import get_logger, setup_logging
from utils.validators import format_errors, validate_model

logger = get_logger("cli")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILURE = 3


def handle_errors(f: Callable[..., Any]) -> Callable[..., int]:
    """Run a command and translate the outcome into an exit code."""

    @wraps(f)
    def decorated_function(*args, **kwargs) -> int:
        errors = Console(stderr=True, highlight=False, markup=False, soft_wrap=True)
        try:
            f(*args, **kwargs)
            return EXIT_OK
        except (ValidationError, ConfigurationError) as e:
            logger.warning("invalid input", error=e.message, error_code=e.error_code)
            errors.print(f"error: {e.message}")
            return EXIT_INVALID
        except PydanticValidationError as e:
            message = "; ".join(format_errors(e))
            logger.warning("invalid input", error=message)
            errors.print(f"error: {message}")
            return EXIT_INVALID
        except SirExactError as e:
            logger.error("run failed", error=e.message, error_code=e.error_code, details=e.details)
            errors.print(f"error: {e.message}")
            return EXIT_FAILURE

    return decorated_function


def _add_common(parser: argparse.ArgumentParser, grid: bool = False) -> None:
    rate = str if grid else float
    rate_help = " (list a,b,c or start:stop:count)" if grid else ""
    parser.add_argument("--b", type=rate, help="Infection rate b > 0" + rate_help)
    parser.add_argument("--c", type=rate, help="Recovery rate c > 0" + rate_help)
    parser.add_argument("--h", type=rate, help="Step size h > 0 (default 1)" + rate_help)
    parser.add_argument("--x0", type=float, help="Initial susceptible x0 > 0")
    parser.add_argument("--y0", type=float, help="Initial infective y0 > 0")
    parser.add_argument("--z0", type=float, help="Initial removed z0 >= 0 (default 0)")
    parser.add_argument("--out", help="Output CSV path (default: stdout)")
    parser.add_argument("--precision", type=int, help="Significant digits, 6-17 (default 17)")
    parser.add_argument(
        "--config", help="Run file with defaults for these flags (key = value lines or flat YAML)"
    )
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")


def _add_horizon(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t0", type=float, help="Initial time (default 0)")
    horizon = parser.add_mutually_exclusive_group()
    horizon.add_argument("--steps", type=int, help="Number of steps")
    horizon.add_argument("--t-end", type=float, help="End time; steps = round((t_end - t0) / h)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sir-exact",
        description="Exact discrete and continuous solutions of the SIR model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="Trajectory of one scheme as CSV")
    _add_common(simulate)
    _add_horizon(simulate)
    simulate.add_argument(
        "--scheme", help=f"One of {', '.join(s.value for s in Scheme)} (default nsfd)"
    )

    exact = sub.add_parser("exact", help="State at step n from the closed-form product")
    _add_common(exact)
    exact.add_argument("--t0", type=float, help="Initial time (default 0)")
    exact.add_argument("--n", type=int, required=True, help="Step index n >= 0")

    compare = sub.add_parser("compare", help="Several schemes side by side as CSV")
    _add_common(compare)
    _add_horizon(compare)
    compare.add_argument("--scheme", help="Comma-separated list of at least two schemes")

    classify = sub.add_parser("classify", help="R0, limit point and alpha as key: value lines")
    _add_common(classify)
    classify.add_argument("--t0", type=float, help="Initial time (default 0)")

    sweep = sub.add_parser("sweep", help="Metrics over a (b, c, h) grid as CSV")
    _add_common(sweep, grid=True)
    sweep.add_argument("--metric", help=f"One of {', '.join(METRICS)} (default all)")
    sweep.add_argument("--flawed-steps", type=int, help="Flawed-scheme steps per cell")
    sweep.add_argument("--threads", type=int, help="Worker threads (capped by SIR_EXACT_THREADS)")
    return parser


def _project_defaults() -> Dict[str, Any]:
    try:
        return load_config()
    except ConfigurationError as e:
        logger.debug("no project config, using built-in defaults", error=e.message)
        return {}


def _section(defaults: Dict[str, Any], name: str) -> Dict[str, Any]:
    value = defaults.get(name) or {}
    return value if isinstance(value, dict) else {}


@handle_errors
def dispatch(args: argparse.Namespace, defaults: Dict[str, Any]) -> None:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "log_level")}
    output = _section(defaults, "output")
    analysis = _section(defaults, "analysis")
    sweep_defaults = _section(defaults, "sweep")

    if args.command == "sweep":
        settings = merge_settings(args.config, flags, allowed=SWEEP_KEYS)
        settings.setdefault("precision", output.get("precision", 17))
        settings.setdefault("flawed_steps", sweep_defaults.get("flawed_steps", 100))
        config = validate_model(settings, SweepConfig)
        cmd_sweep(
            config,
            threads=config.threads if config.threads is not None else sweep_defaults.get("threads"),
            alpha_tol=float(analysis.get("alpha_tol", DEFAULT_ALPHA_TOL)),
            max_iter=int(analysis.get("alpha_max_iter", DEFAULT_MAX_ITER)),
            max_cells=int(sweep_defaults.get("max_cells", MAX_CELLS)),
        )
        return

    n = flags.pop("n", None)
    settings = merge_settings(args.config, flags, allowed=RUN_KEYS)
    settings.setdefault("precision", output.get("precision", 17))
    if args.command == "compare":
        settings["schemes"] = settings.pop("scheme", None)
    run = validate_model(settings, RunConfig)

    if args.command == "simulate":
        cmd_simulate(run)
    elif args.command == "exact":
        cmd_exact(run, n)
    elif args.command == "compare":
        cmd_compare(run)
    elif args.command == "classify":
        cmd_classify(
            run,
            alpha_tol=float(analysis.get("alpha_tol", DEFAULT_ALPHA_TOL)),
            max_iter=int(analysis.get("alpha_max_iter", DEFAULT_MAX_ITER)),
        )


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run the subcommand and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    defaults = _project_defaults()
    log_config = _section(defaults, "logging")
    setup_logging(args.log_level or log_config.get("level", "WARNING"), log_config.get("file"))
    logger.debug("command", command=args.command)
    return dispatch(args, defaults)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
