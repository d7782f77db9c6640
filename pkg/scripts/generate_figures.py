#!/usr/bin/env python3
"""
Write the plot-ready CSVs of the three illustrative runs (h = 0.05, x0 = 0.8, y0 = 0.2).

  figure1.csv  b = 0.3, c = 0.1: continuous solution next to the exact discrete one
  figure2.csv  b = 0.3, c in {0.05, 0.1, 0.2}: infected compartment of the discrete model
  figure3.csv  b = 0.3, c = 0.6: continuous next to discrete, x tends to alpha ~ 0.636
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd
from rich.console import Console

PROJECT_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(PROJECT_ROOT))

from cli.csv_io import write_frame  # noqa: E402
from models.continuous import continuous_exact_orbit  # noqa: E402
from models.discrete import exact_discrete_orbit  # noqa: E402
from models.types import InitialState, SirParameters  # noqa: E402
from utils.logger import setup_logging  # noqa: E402

console = Console(stderr=True)

B = 0.3
H = 0.05
INIT = InitialState(x0=0.8, y0=0.2, z0=0.0)
FIGURE2_C = (0.05, 0.1, 0.2)


def side_by_side(c: float, n_steps: int) -> pd.DataFrame:
    params = SirParameters(b=B, c=c, h=H)
    continuous = continuous_exact_orbit(INIT, params, n_steps).to_frame(prefix="continuous")
    discrete = exact_discrete_orbit(INIT, params, n_steps).to_frame(prefix="discrete")
    return pd.concat([continuous, discrete.drop(columns=["n", "t"])], axis=1)


def infected_by_recovery_rate(n_steps: int) -> pd.DataFrame:
    frame = None
    for c in FIGURE2_C:
        orbit = exact_discrete_orbit(INIT, SirParameters(b=B, c=c, h=H), n_steps).to_frame()
        column = orbit[["n", "t", "y"]].rename(columns={"y": f"y_c{c:g}"})
        frame = column if frame is None else pd.concat([frame, column.iloc[:, 2:]], axis=1)
    return frame


def build_figures(t_end: float = 100.0) -> Dict[str, pd.DataFrame]:
    """Frames of the three runs on t = 0, h, ..., t_end, keyed by file name."""
    n_steps = int(round(t_end / H))
    return {
        "figure1.csv": side_by_side(0.1, n_steps),
        "figure2.csv": infected_by_recovery_rate(n_steps),
        "figure3.csv": side_by_side(0.6, n_steps),
    }


def main(argv: Optional[List[str]] = None):
    parser = argparse.ArgumentParser(description="Write the illustrative figure data as CSV.")
    parser.add_argument("--out-dir", default="figures", help="Directory for the CSV files.")
    parser.add_argument("--t-end", type=float, default=100.0, help="End time of every run.")
    parser.add_argument("--precision", type=int, default=17, help="Significant digits (6-17).")
    args = parser.parse_args(argv)

    setup_logging("WARNING")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for name, frame in build_figures(args.t_end).items():
        write_frame(frame, out_dir / name, args.precision)
        console.print(f"[green]wrote[/green] {out_dir / name} ({len(frame)} rows)")


if __name__ == "__main__":
    main()
