#!/usr/bin/env python3
"""sir-exact command line: outputs, config files and exit codes."""

import io
import sys

import pandas as pd
import pytest

from cli.csv_io import frame_to_csv, read_frame, write_frame
from cli.main import main
from utils.exceptions import ConfigurationError
from utils.helpers import format_float, load_config, resolve_thread_count

OUTBREAK = ["--b", "0.3", "--c", "0.1", "--h", "0.05", "--x0", "0.8", "--y0", "0.2"]
FADING = ["--b", "0.3", "--c", "0.6", "--h", "0.05", "--x0", "0.8", "--y0", "0.2"]
COUNTEREXAMPLE = ["--b", "1.5", "--c", "0.1", "--h", "1", "--x0", "0.6", "--y0", "0.4"]


def report_lines(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def test_simulate_writes_a_trajectory(tmp_path):
    out = tmp_path / "run.csv"
    assert main(["simulate", *OUTBREAK, "--steps", "20000", "--out", str(out)]) == 0

    assert out.read_text().splitlines()[0] == "n,t,x,y,z"
    frame = read_frame(out)
    assert len(frame) == 20001
    final = frame.iloc[-1]
    assert final["x"] < 1e-3 and final["y"] < 1e-3
    assert final["z"] == pytest.approx(1.0, abs=2e-3)


def test_simulate_zero_steps_is_the_initial_state(capsys):
    assert main(["simulate", *OUTBREAK, "--steps", "0"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines == ["n,t,x,y,z", "0,0,0.8,0.2,0"]


def test_simulate_by_end_time(tmp_path):
    out = tmp_path / "fading.csv"
    args = ["simulate", *FADING, "--t-end", "400", "--scheme", "exact_discrete", "--out", str(out)]
    assert main(args) == 0
    frame = read_frame(out)
    assert len(frame) == 8001
    assert frame["x"].iloc[-1] == pytest.approx(0.636, abs=1e-3)


def test_precision_controls_digits(capsys):
    assert main(["simulate", *OUTBREAK, "--steps", "1", "--precision", "6"]) == 0
    row = capsys.readouterr().out.strip().splitlines()[2]
    assert row == "1,0.05,0.797607,0.201386,0.00100693"


def test_exact_matches_simulate(capsys):
    assert main(["exact", *OUTBREAK, "--n", "1"]) == 0
    exact = report_lines(capsys.readouterr().out)
    assert main(["simulate", *OUTBREAK, "--steps", "1"]) == 0
    simulated = capsys.readouterr().out.strip().splitlines()[2].split(",")
    for value, column in zip(simulated[2:], ("x", "y", "z")):
        assert float(exact[column]) == pytest.approx(float(value), rel=1e-14)


def test_exact_at_zero_echoes_the_initial_state(capsys):
    assert main(["exact", *OUTBREAK, "--n", "0"]) == 0
    report = report_lines(capsys.readouterr().out)
    assert (report["x"], report["y"], report["z"]) == ("0.8", "0.2", "0")


@pytest.mark.parametrize(
    "value, precision, expected",
    [
        (0.8, 17, "0.8"),
        (0.1 + 0.2, 17, "0.30000000000000004"),
        (100.0, 17, "100"),
        (-2.5e-300, 17, "-2.5e-300"),
        (0.1 + 0.2, 6, "0.3"),
        (2.0 / 3.0, 6, "0.666667"),
        (float("nan"), 17, ""),
    ],
)
def test_floats_render_in_shortest_round_trip_form(value, precision, expected):
    assert format_float(value, precision) == expected


def test_every_rendered_float_reads_back_exactly():
    for value in (1 / 3, 2.0**-1074, 1.7976931348623157e308, 12345678.9, 0.05 * 3):
        assert float(format_float(value)) == value


def test_exact_far_future(capsys):
    assert main(["exact", *OUTBREAK, "--n", "1000000"]) == 0
    report = report_lines(capsys.readouterr().out)
    assert float(report["y"]) == pytest.approx(0.0, abs=1e-300)
    assert float(report["z"]) == pytest.approx(1.0, abs=1e-12)


def test_exact_rejects_negative_index(capsys):
    assert main(["exact", *OUTBREAK, "--n", "-3"]) == 2
    assert "n" in capsys.readouterr().err


def test_compare_flawed_against_nsfd(tmp_path):
    out = tmp_path / "compare.csv"
    args = ["compare", *COUNTEREXAMPLE, "--steps", "3", "--scheme", "flawed_dynamic,nsfd"]
    assert main([*args, "--out", str(out)]) == 0
    frame = read_frame(out)
    assert list(frame.columns) == [
        "n",
        "t",
        "flawed_dynamic_x",
        "flawed_dynamic_y",
        "flawed_dynamic_z",
        "nsfd_x",
        "nsfd_y",
        "nsfd_z",
    ]
    assert frame["flawed_dynamic_x"][1] == pytest.approx(-1.2, abs=1e-12)
    assert (frame[["nsfd_x", "nsfd_y", "nsfd_z"]].iloc[1:] > 0).all().all()


def test_compare_nsfd_with_exact_discrete(capsys):
    args = ["compare", *OUTBREAK, "--t-end", "50", "--scheme", "nsfd,exact_discrete"]
    assert main(args) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    for column in ("x", "y"):
        pd.testing.assert_series_equal(
            frame[f"nsfd_{column}"],
            frame[f"exact_discrete_{column}"],
            check_names=False,
            rtol=1e-9,
        )


def test_compare_nsfd_with_continuous_is_first_order(capsys):
    gaps = []
    for h in ("0.1", "0.05"):
        args = ["compare", "--b", "0.3", "--c", "0.1", "--h", h, "--x0", "0.8", "--y0", "0.2"]
        assert main([*args, "--t-end", "50", "--scheme", "nsfd,continuous_exact"]) == 0
        frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
        gaps.append((frame["nsfd_x"] - frame["continuous_exact_x"]).abs().max())
    assert 0.4 <= gaps[1] / gaps[0] <= 0.6


def test_compare_refuses_flawed_scheme_off_unit_step(tmp_path, capsys):
    out = tmp_path / "never.csv"
    args = ["compare", *OUTBREAK, "--steps", "3", "--scheme", "nsfd,flawed_dynamic"]
    assert main([*args, "--out", str(out)]) == 2
    assert "h" in capsys.readouterr().err
    assert not out.exists()


def test_compare_needs_two_schemes(capsys):
    assert main(["compare", *OUTBREAK, "--steps", "3", "--scheme", "nsfd"]) == 2
    assert "scheme" in capsys.readouterr().err


def test_classify_outbreak(capsys):
    assert main(["classify", *OUTBREAK]) == 0
    report = report_lines(capsys.readouterr().out)
    assert float(report["r0"]) == pytest.approx(3.0)
    assert report["regime"] == "ExtinctionStable"
    assert (float(report["limit_x"]), float(report["limit_y"]), float(report["limit_z"])) == (
        0.0,
        0.0,
        1.0,
    )
    assert report["alpha"] == "none"
    assert report["p_threshold"] == "210"


def test_classify_boundary(capsys):
    args = ["classify", "--b", "0.2", "--c", "0.2", "--x0", "1", "--y0", "1", "--z0", "2"]
    assert main(args) == 0
    report = report_lines(capsys.readouterr().out)
    assert float(report["r0"]) == 1.0
    assert float(report["limit_z"]) == 4.0
    assert "p_threshold" not in report


def test_classify_fading(capsys):
    assert main(["classify", *FADING]) == 0
    report = report_lines(capsys.readouterr().out)
    assert float(report["r0"]) == pytest.approx(0.5)
    assert report["regime"] == "EndemicFreeStable"
    assert float(report["alpha"]) == pytest.approx(0.636, abs=1e-3)


def test_classify_verifies_the_threshold_index(capsys):
    assert main(["classify", *OUTBREAK]) == 0
    report = report_lines(capsys.readouterr().out)
    assert report["p_verified"] == "true"
    assert 209.0 <= float(report["p_bound"]) < 210.0


def test_alpha_budget_comes_from_project_defaults(monkeypatch, capsys):
    # cli/__init__ re-exports main(), shadowing the submodule; patch the module object.
    monkeypatch.setattr(
        sys.modules["cli.main"], "_project_defaults", lambda: {"analysis": {"alpha_max_iter": 10}}
    )
    assert main(["classify", *FADING]) == 3
    assert "alpha" in capsys.readouterr().err


def test_every_project_config_section_is_read():
    assert set(load_config()) == {"logging", "output", "analysis", "sweep"}


@pytest.mark.parametrize(
    "env, configured, expected",
    [("8", 2, 2), ("3", 6, 3), ("4", None, 4), (None, 5, 5), ("0", 5, 1)],
)
def test_thread_variable_caps_the_configured_count(monkeypatch, env, configured, expected):
    monkeypatch.setattr("utils.helpers.load_dotenv", lambda: False)
    if env is None:
        monkeypatch.delenv("SIR_EXACT_THREADS", raising=False)
    else:
        monkeypatch.setenv("SIR_EXACT_THREADS", env)
    assert resolve_thread_count(configured) == expected


def test_malformed_thread_variable_is_a_config_error(monkeypatch):
    monkeypatch.setattr("utils.helpers.load_dotenv", lambda: False)
    monkeypatch.setenv("SIR_EXACT_THREADS", "many")
    with pytest.raises(ConfigurationError):
        resolve_thread_count(2)


def test_sweep_over_recovery_rates(tmp_path):
    out = tmp_path / "sweep.csv"
    args = ["sweep", "--b", "0.3", "--c", "0.05,0.1,0.2", "--h", "0.05", "--x0", "0.8"]
    assert main([*args, "--y0", "0.2", "--out", str(out)]) == 0
    frame = read_frame(out)
    assert list(frame["regime"]) == ["ExtinctionStable"] * 3


def test_sweep_is_byte_identical_across_thread_counts(tmp_path, monkeypatch):
    args = ["sweep", "--b", "0.1:3:8", "--c", "0.1,0.5,1", "--h", "1,0.25"]
    outputs = []
    for threads in ("1", "5"):
        monkeypatch.setenv("SIR_EXACT_THREADS", threads)
        out = tmp_path / f"sweep_{threads}.csv"
        assert main([*args, "--x0", "0.8", "--y0", "0.2", "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_sweep_rejects_an_empty_grid(capsys):
    assert main(["sweep", "--b", ",", "--c", "0.1", "--x0", "0.8", "--y0", "0.2"]) == 2
    assert "grid" in capsys.readouterr().err


def test_missing_parameter_names_the_field(capsys):
    assert main(["simulate", "--c", "0.1", "--x0", "0.8", "--y0", "0.2", "--steps", "5"]) == 2
    assert "b" in capsys.readouterr().err


def test_invalid_parameter_names_the_field(capsys):
    args = ["simulate", "--b", "-0.3", "--c", "0.1", "--x0", "0.8", "--y0", "0.2", "--steps", "5"]
    assert main(args) == 2
    assert "b:" in capsys.readouterr().err


def test_missing_horizon_is_invalid(capsys):
    assert main(["simulate", *OUTBREAK]) == 2
    assert "steps" in capsys.readouterr().err


def test_steps_and_end_time_are_exclusive():
    assert main(["simulate", *OUTBREAK, "--steps", "3", "--t-end", "1"]) == 2


def test_precision_out_of_range(capsys):
    assert main(["simulate", *OUTBREAK, "--steps", "3", "--precision", "5"]) == 2
    assert "precision" in capsys.readouterr().err


def test_unknown_scheme(capsys):
    assert main(["simulate", *OUTBREAK, "--steps", "3", "--scheme", "leapfrog"]) == 2
    assert "scheme" in capsys.readouterr().err


def test_runtime_failure_leaves_no_file(tmp_path):
    out = tmp_path / "broken.csv"
    args = ["simulate", "--scheme", "flawed_dynamic", "--b", "2.2", "--c", "0.1", "--h", "1"]
    assert main([*args, "--x0", "0.5", "--y0", "0.5", "--steps", "3", "--out", str(out)]) == 3
    assert not out.exists()
    assert list(tmp_path.iterdir()) == []


def test_config_file_with_flag_override(tmp_path, capsys):
    config = tmp_path / "run.ini"
    config.write_text("# fading outbreak\nb = 0.3\nc = 0.6\nh = 0.05\nx0 = 0.8\ny0 = 0.2\n")
    assert main(["classify", "--config", str(config)]) == 0
    assert report_lines(capsys.readouterr().out)["regime"] == "EndemicFreeStable"

    assert main(["classify", "--config", str(config), "--c", "0.1"]) == 0
    assert report_lines(capsys.readouterr().out)["regime"] == "ExtinctionStable"


def test_yaml_config_file(tmp_path, capsys):
    config = tmp_path / "run.yaml"
    config.write_text("b: 0.3\nc: 0.1\nh: 0.05\nx0: 0.8\ny0: 0.2\nsteps: 2\nt-end: null\n")
    assert main(["simulate", "--config", str(config)]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 4


def test_config_file_with_unknown_key(tmp_path, capsys):
    config = tmp_path / "run.ini"
    config.write_text("b = 0.3\nbeta = 0.1\n")
    assert main(["classify", "--config", str(config)]) == 2
    assert "beta" in capsys.readouterr().err


def test_sweep_threads_from_config_file(tmp_path, capsys):
    config = tmp_path / "sweep.ini"
    config.write_text("b = 0.3\nc = 0.1,0.6\nx0 = 0.8\ny0 = 0.2\nthreads = 2\n")
    assert main(["sweep", "--config", str(config)]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 3

    config.write_text("b = 0.3\nc = 0.1\nx0 = 0.8\ny0 = 0.2\nthreads = 0\n")
    assert main(["sweep", "--config", str(config)]) == 2
    assert "threads" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["classify", "--config", str(tmp_path / "absent.ini")]) == 2


def test_csv_round_trip_is_byte_identical(tmp_path):
    out = tmp_path / "trip.csv"
    args = ["compare", *FADING, "--steps", "50", "--scheme", "rk4,nsfd"]
    assert main([*args, "--out", str(out)]) == 0
    original = out.read_text()
    assert frame_to_csv(read_frame(out), 17) == original

    sweep = tmp_path / "sweep.csv"
    args = ["sweep", "--b", "0.2,1.5", "--c", "0.1,0.3", "--x0", "0.6", "--y0", "0.4"]
    assert main([*args, "--out", str(sweep)]) == 0
    text = sweep.read_text()
    copy = tmp_path / "copy.csv"
    write_frame(read_frame(sweep), copy, 17)
    assert copy.read_text() == text
