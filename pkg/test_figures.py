#!/usr/bin/env python3
"""Illustrative figure data against closed-form reference values in fixtures/."""

import importlib.util
from pathlib import Path

import pandas as pd
import pytest

from cli.csv_io import read_frame

ROOT = Path(__file__).resolve().parent
FIXTURES = ROOT / "fixtures"
FIGURE_FILES = ("figure1.csv", "figure2.csv", "figure3.csv")


def load_figure_script():
    location = importlib.util.spec_from_file_location(
        "generate_figures", ROOT / "scripts" / "generate_figures.py"
    )
    module = importlib.util.module_from_spec(location)
    location.loader.exec_module(module)
    return module


@pytest.fixture(scope="module")
def figure_script():
    return load_figure_script()


@pytest.fixture(scope="module")
def figures(figure_script):
    return figure_script.build_figures(100.0)


@pytest.mark.parametrize("name", FIGURE_FILES)
def test_figure_matches_reference_values(figures, name):
    frame = figures[name]
    assert len(frame) == 2001
    sampled = frame[frame["n"] % 100 == 0].reset_index(drop=True)
    reference = pd.read_csv(FIXTURES / name, float_precision="round_trip")
    pd.testing.assert_frame_equal(
        sampled, reference, check_dtype=False, check_exact=False, rtol=1e-10, atol=1e-20
    )


def test_fading_run_settles_near_both_limits(figures):
    final = figures["figure3.csv"].iloc[-1]
    assert final["continuous_x"] == pytest.approx(0.64, abs=1e-9)
    assert final["discrete_x"] == pytest.approx(0.636, abs=1e-3)


def test_written_figures_are_byte_stable(figure_script, tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    figure_script.main(["--out-dir", str(first), "--t-end", "10"])
    figure_script.main(["--out-dir", str(second), "--t-end", "10"])

    expected = figure_script.build_figures(10.0)
    for name in FIGURE_FILES:
        assert (first / name).read_bytes() == (second / name).read_bytes()
        pd.testing.assert_frame_equal(
            read_frame(first / name), expected[name], check_dtype=False, check_exact=True
        )
