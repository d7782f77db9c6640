"""Threshold quantities, equilibria, convergence diagnostics and order estimates."""

from .convergence import OrderEstimate, estimate_order
from .equilibrium import (
    ConvergenceDiagnostics,
    EquilibriumReport,
    Regime,
    classify_equilibrium,
    convergence_diagnostics,
    reproduction_number,
)
from .negativity import NegativityViolation, detect_negativity
from .sweep import SweepCell, evaluate_cell, expand_grid, parse_axis, run_sweep

__all__ = [
    "ConvergenceDiagnostics",
    "EquilibriumReport",
    "NegativityViolation",
    "OrderEstimate",
    "Regime",
    "SweepCell",
    "classify_equilibrium",
    "convergence_diagnostics",
    "detect_negativity",
    "estimate_order",
    "evaluate_cell",
    "expand_grid",
    "parse_axis",
    "run_sweep",
]
