"""
Subcommand implementations.

Each command takes validated settings, writes its CSV or report and returns nothing;
errors propagate as SirExactError subclasses and are mapped to exit codes in cli.main.
"""

from typing import Any, Dict, List, Optional

import pandas as pd
from rich.console import Console

from analysis.equilibrium import (
    DEFAULT_ALPHA_TOL,
    DEFAULT_MAX_ITER,
    classify_equilibrium,
    convergence_diagnostics,
)
from analysis.sweep import MAX_CELLS, expand_grid, parse_axis, run_sweep
from cli.config import RunConfig, SweepConfig
from cli.csv_io import write_frame
from models.discrete import exact_discrete
from models.schemes import simulate
from models.types import Scheme
from utils.exceptions import ValidationError
from utils.helpers import format_float, resolve_thread_count
from utils.logger import get_logger

logger = get_logger("cli.commands")


def report_console() -> Console:
    """Plain console on stdout: no markup, highlighting or wrapping."""
    return Console(highlight=False, soft_wrap=True, markup=False, emoji=False)


def print_report(lines: Dict[str, Any], precision: int = 17) -> None:
    console = report_console()
    for key, value in lines.items():
        if isinstance(value, float):
            value = format_float(value, precision)
        console.print(f"{key}: {value}")


def _require_unit_step(scheme: Scheme, h: float) -> None:
    if scheme is Scheme.FLAWED_DYNAMIC and h != 1.0:
        raise ValidationError(
            f"h: the {scheme.value} scheme is defined for h = 1 only, got h = {h}",
            error_code="VALIDATION_ERROR",
            details={"errors": ["h: flawed_dynamic requires h = 1"], "fields": ["h"]},
        )


def cmd_simulate(config: RunConfig) -> None:
    """Trajectory of one scheme: columns n, t, x, y, z."""
    _require_unit_step(config.scheme, config.h)
    n_steps = config.n_steps
    logger.info("simulate", scheme=config.scheme.value, n_steps=n_steps, h=config.h)
    trajectory = simulate(config.scheme, config.init, config.params, n_steps)
    write_frame(trajectory.to_frame(), config.out, config.precision)


def cmd_exact(config: RunConfig, n: int) -> None:
    """Single state at step n from the closed-form product."""
    state = exact_discrete(config.init, config.params, n)
    lines: Dict[str, Any] = {
        "n": n,
        "t": config.t0 + n * config.h,
        "x": state.x,
        "y": state.y,
        "z": state.z,
    }
    if config.out is None:
        print_report(lines, config.precision)
    else:
        write_frame(pd.DataFrame([lines]), config.out, config.precision)


def cmd_compare(config: RunConfig) -> None:
    """Side-by-side trajectories: n, t, then <scheme>_x, <scheme>_y, <scheme>_z per scheme."""
    schemes: List[Scheme] = list(config.schemes or [])
    if len(schemes) < 2:
        raise ValidationError(
            "scheme: compare needs at least two schemes (comma-separated)",
            error_code="VALIDATION_ERROR",
            details={"errors": ["scheme: fewer than two schemes"], "fields": ["scheme"]},
        )
    if len(set(schemes)) != len(schemes):
        raise ValidationError(
            "scheme: each scheme may appear once",
            error_code="VALIDATION_ERROR",
            details={"errors": ["scheme: duplicate scheme"], "fields": ["scheme"]},
        )
    for scheme in schemes:
        _require_unit_step(scheme, config.h)

    n_steps = config.n_steps
    frames = []
    for i, scheme in enumerate(schemes):
        frame = simulate(scheme, config.init, config.params, n_steps).to_frame(prefix=scheme.value)
        frames.append(frame if i == 0 else frame.drop(columns=["n", "t"]))
    write_frame(pd.concat(frames, axis=1), config.out, config.precision)


def cmd_classify(
    config: RunConfig,
    alpha_tol: float = DEFAULT_ALPHA_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> None:
    """key: value report of R0, the regime, the limit point, alpha and the threshold p."""
    report = classify_equilibrium(config.init, config.params, tol=alpha_tol, max_iter=max_iter)
    diagnostics = convergence_diagnostics(config.init, config.params, 1)

    lines: Dict[str, Any] = {
        "r0": report.r0,
        "regime": report.regime.value,
        "limit_x": report.limit_point.x,
        "limit_y": report.limit_point.y,
        "limit_z": report.limit_point.z,
        "alpha": report.alpha if report.alpha is not None else "none",
        "iterations_used": report.iterations_used,
        "xi": diagnostics.xi,
    }
    if diagnostics.p_threshold is not None:
        lines["p_threshold"] = diagnostics.p_threshold
        lines["p_bound"] = diagnostics.p_bound
        lines["p_verified"] = str(diagnostics.p_verified).lower()
    print_report(lines, config.precision)


def cmd_sweep(
    config: SweepConfig,
    threads: Optional[int] = None,
    alpha_tol: float = DEFAULT_ALPHA_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_cells: int = MAX_CELLS,
) -> None:
    """One CSV row per (b, c, h) cell in grid order."""
    cells = expand_grid(
        parse_axis(config.b), parse_axis(config.c), parse_axis(config.h), max_cells=max_cells
    )
    frame = run_sweep(
        cells,
        config.init,
        metric=config.metric,
        threads=resolve_thread_count(threads),
        flawed_steps=config.flawed_steps,
        alpha_tol=alpha_tol,
        max_iter=max_iter,
    )
    write_frame(frame, config.out, config.precision)
