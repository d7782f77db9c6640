"""
Parameter sweeps over grids of (b, c, h).

Cells are evaluated independently on a thread pool; results are collected in grid order
so the output does not depend on the number of workers.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from analysis.equilibrium import (
    DEFAULT_ALPHA_TOL,
    DEFAULT_MAX_ITER,
    classify_equilibrium,
    convergence_diagnostics,
)
from analysis.negativity import detect_negativity
from models.types import InitialState, SirParameters
from utils.exceptions import SchemeError, ValidationError
from utils.logger import get_logger

logger = get_logger("analysis.sweep")

METRICS = ("all", "classify", "negativity")
MAX_CELLS = 10**6


class SweepCell(NamedTuple):
    index: int
    b: float
    c: float
    h: float


def parse_axis(text: str) -> List[float]:
    """
    One grid axis: ``0.3``, a comma list ``0.05,0.1,0.2`` or a linspace
    ``start:stop:count`` (the forms may be mixed in a comma list).
    """
    values: List[float] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ":" in part:
                start, stop, count = part.split(":")
                values.extend(np.linspace(float(start), float(stop), int(count)).tolist())
            else:
                values.append(float(part))
        except ValueError as e:
            raise ValidationError(
                f"grid: cannot parse axis {text!r}",
                error_code="VALIDATION_ERROR",
                details={"errors": [f"grid: cannot parse {part!r}"], "fields": ["grid"]},
            ) from e
    return values


def expand_grid(
    b_values: Sequence[float],
    c_values: Sequence[float],
    h_values: Sequence[float],
    max_cells: int = MAX_CELLS,
) -> List[SweepCell]:
    """Cartesian product in (b, c, h) order."""
    size = len(b_values) * len(c_values) * len(h_values)
    if size == 0:
        raise ValidationError(
            "grid: the parameter grid is empty",
            error_code="EMPTY_GRID",
            details={"errors": ["grid: empty"], "fields": ["grid"]},
        )
    if size > max_cells:
        raise ValidationError(
            f"grid: {size} cells exceed the limit of {max_cells}",
            error_code="GRID_TOO_LARGE",
            details={"errors": [f"grid: {size} cells"], "fields": ["grid"]},
        )
    for name, axis in (("b", b_values), ("c", c_values), ("h", h_values)):
        if any(not (v > 0 and math.isfinite(v)) for v in axis):
            raise ValidationError(
                f"{name}: grid values must be positive and finite",
                error_code="VALIDATION_ERROR",
                details={"errors": [f"{name}: grid values must be positive"], "fields": [name]},
            )
    return [
        SweepCell(i, float(b), float(c), float(h))
        for i, (b, c, h) in enumerate(itertools.product(b_values, c_values, h_values))
    ]


def evaluate_cell(
    cell: SweepCell,
    init: InitialState,
    metric: str = "all",
    flawed_steps: int = 100,
    alpha_tol: float = DEFAULT_ALPHA_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> Dict[str, Any]:
    """Metrics of one grid cell as a flat row."""
    params = SirParameters(b=cell.b, c=cell.c, h=cell.h)
    row: Dict[str, Any] = {"b": cell.b, "c": cell.c, "h": cell.h, "r0": cell.b / cell.c}

    if metric in ("all", "classify"):
        report = classify_equilibrium(init, params, tol=alpha_tol, max_iter=max_iter)
        diagnostics = convergence_diagnostics(init, params, 1)
        row.update(
            regime=report.regime.value,
            limit_x=report.limit_point.x,
            limit_y=report.limit_point.y,
            limit_z=report.limit_point.z,
            alpha=report.alpha if report.alpha is not None else math.nan,
            p_threshold=diagnostics.p_threshold,
        )

    if metric in ("all", "negativity"):
        # The flawed scheme always steps with h = 1 at constant rates b, c
        try:
            violation = detect_negativity(init, cell.b, cell.c, flawed_steps)
        except SchemeError:
            row.update(flawed_status="division_by_zero", flawed_step=None, flawed_component="")
        else:
            if violation is None:
                row.update(flawed_status="nonnegative", flawed_step=None, flawed_component="")
            else:
                row.update(
                    flawed_status="negative",
                    flawed_step=violation.step,
                    flawed_component=violation.component,
                )
    return row


def run_sweep(
    cells: Sequence[SweepCell],
    init: InitialState,
    metric: str = "all",
    threads: int = 1,
    flawed_steps: int = 100,
    alpha_tol: float = DEFAULT_ALPHA_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    progress: Optional[bool] = None,
) -> pd.DataFrame:
    """
    Evaluate every cell and return one row per cell in grid order.

    Args:
        cells: Cells from ``expand_grid``
        init: Initial state shared by all cells
        metric: ``all``, ``classify`` or ``negativity``
        threads: Worker count
        flawed_steps: Steps of the flawed scheme per cell
        alpha_tol: Deficit tolerance for alpha
        max_iter: Factor budget for alpha
        progress: Show a progress bar on stderr (default: only for large grids)
    """
    if metric not in METRICS:
        raise ValidationError(
            f"metric: must be one of {', '.join(METRICS)}, got {metric!r}",
            error_code="VALIDATION_ERROR",
            details={"errors": ["metric: unknown metric"], "fields": ["metric"]},
        )
    if not cells:
        raise ValidationError(
            "grid: the parameter grid is empty",
            error_code="EMPTY_GRID",
            details={"errors": ["grid: empty"], "fields": ["grid"]},
        )
    if progress is None:
        progress = len(cells) >= 1000

    def work(cell: SweepCell) -> Dict[str, Any]:
        return evaluate_cell(cell, init, metric, flawed_steps, alpha_tol, max_iter)

    logger.info("sweep started", cells=len(cells), metric=metric, threads=threads)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        # map() yields in submission order, whatever the completion order
        rows = list(
            tqdm(pool.map(work, cells), total=len(cells), disable=not progress, desc="sweep")
        )
    logger.info("sweep finished", cells=len(rows))

    frame = pd.DataFrame(rows)
    for column in ("p_threshold", "flawed_step"):
        if column in frame:
            frame[column] = frame[column].astype("Int64")
    return frame
