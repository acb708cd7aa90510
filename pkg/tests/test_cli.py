# -*- coding: utf-8 -*-
"""
Tests for the command line interface.
"""

import json
import os
from unittest.mock import patch

import pandas as pd
import pytest

from lanneal.cli import (
    EXIT_CONFIG_ERROR,
    EXIT_FAILURE,
    EXIT_SUCCESS,
    get_parser,
    main,
)
from lanneal.errors import OptimizationError, RolloutError
from lanneal.experiment import load_config

SMALL = [
    "system.n=3",
    "grid.horizon=1.0",
    "grid.steps=10",
    "solver.m=2",
    "solver.max_iter=3",
    "holdout.m=3",
    "init.vel_variance=1.0",
]


def _args(command, outdir, overrides=(), plots=False):
    args = [command]
    for item in [*overrides, f"out.dir={outdir}"]:
        args += ["--set", item]
    if not plots:
        args.append("--no-plots")
    return args


def _read(path):
    with open(path, "rb") as fp:
        return fp.read()


def test_parser_requires_command():
    with pytest.raises(SystemExit) as excinfo:
        get_parser().parse_args([])
    assert excinfo.value.code == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert "lanneal" in capsys.readouterr().out


def test_simulate(tmp_path):
    outdir = tmp_path / "out"
    assert main(_args("simulate", outdir, SMALL)) == EXIT_SUCCESS
    for name in [
        "config.json",
        "trajectory.csv",
        "trajectory_summary.csv",
        "hamiltonian.csv",
        "lanneal.log",
    ]:
        assert os.path.exists(outdir / name)
    df = pd.read_csv(outdir / "hamiltonian.csv")
    assert list(df.columns) == ["time", "hamiltonian"]
    assert len(df) == 11
    assert not os.path.exists(outdir / "state.svg")


def test_simulate_plots(tmp_path):
    outdir = tmp_path / "out"
    assert main(_args("simulate", outdir, SMALL, plots=True)) == 0
    assert os.path.exists(outdir / "state.svg")
    assert os.path.exists(outdir / "hamiltonian.svg")


def test_simulate_noise_free(tmp_path):
    outdir = tmp_path / "out"
    overrides = SMALL + ["system.noise=false"]
    assert main(_args("simulate", outdir, overrides)) == EXIT_SUCCESS
    summary = pd.read_csv(outdir / "trajectory_summary.csv")
    assert (summary["u"] == 0).all()


def test_simulate_zero_horizon(tmp_path):
    outdir = tmp_path / "out"
    overrides = ["system.n=3", "grid.steps=0", "grid.horizon=0"]
    assert main(_args("simulate", outdir, overrides)) == EXIT_SUCCESS
    summary = pd.read_csv(outdir / "trajectory_summary.csv")
    assert len(summary) == 1
    assert summary["time"].iloc[0] == 0.0
    assert len(pd.read_csv(outdir / "hamiltonian.csv")) == 1


def test_simulate_rollout_error(tmp_path):
    with patch(
        "lanneal.cli.rollout", side_effect=RolloutError("Coincident", step=2)
    ):
        exit_code = main(_args("simulate", tmp_path / "out", SMALL))
    assert exit_code == EXIT_FAILURE


def test_optimize(tmp_path):
    outdir = tmp_path / "out"
    assert main(_args("optimize", outdir, SMALL)) == EXIT_SUCCESS
    with open(outdir / "report.json") as fp:
        report = json.load(fp)
    assert report["solver"] == "projected-gradient"
    assert report["iterations"] <= 3
    assert report["holdout"]["n_samples"] == 3
    assert report["holdout"]["seed"] == 5678
    history = report["objective_history"]
    assert all(b <= a for a, b in zip(history, history[1:]))
    schedule = pd.read_csv(outdir / "schedule.csv")
    assert list(schedule.columns) == ["step", "time", "u"]
    assert (schedule["u"].diff().dropna() <= 0).all()
    curves = pd.read_csv(outdir / "schedule_plot.csv")
    assert list(curves.columns) == ["time", "optimized", "newton"]


def test_optimize_hdf5(tmp_path):
    outdir = tmp_path / "out"
    overrides = SMALL + ["out.format=hdf5", "solver.max_iter=1"]
    assert main(_args("optimize", outdir, overrides)) == EXIT_SUCCESS
    assert os.path.exists(outdir / "report.hdf5")


def test_optimize_failure(tmp_path):
    outdir = tmp_path / "out"
    error = OptimizationError("Objective is not finite", dump_path="it.json")
    with patch("lanneal.cli.optimized_schedule", side_effect=error):
        assert main(_args("optimize", outdir, SMALL)) == EXIT_FAILURE
    with open(outdir / "report.json") as fp:
        report = json.load(fp)
    assert report["converged"] is False
    assert report["dump_path"] == "it.json"


def test_optimize_rollout_error(tmp_path):
    outdir = tmp_path / "out"
    error = RolloutError("Coincident particles", step=2, sample=1)
    with patch("lanneal.cli.optimized_schedule", side_effect=error):
        assert main(_args("optimize", outdir, SMALL)) == EXIT_FAILURE
    with open(outdir / "report.json") as fp:
        report = json.load(fp)
    assert report["converged"] is False
    assert report["step"] == 2
    assert report["sample"] == 1


def test_optimize_holdout_rollout_error(tmp_path):
    outdir = tmp_path / "out"
    error = RolloutError("Coincident particles", step=4, sample=0)
    with patch("lanneal.cli.evaluate_holdout", side_effect=error):
        assert main(_args("optimize", outdir, SMALL)) == EXIT_FAILURE
    with open(outdir / "report.json") as fp:
        report = json.load(fp)
    assert report["holdout"] is None
    assert report["iterations"] <= 3
    assert len(report["objective_history"]) == report["iterations"] + 1
    assert "Coincident particles" in report["error"]
    assert report["step"] == 4
    assert os.path.exists(outdir / "schedule.csv")


@pytest.mark.integration_test
@pytest.mark.timeout(300)
def test_optimize_is_deterministic(tmp_path):
    """Identical seeds give identical files for any number of threads."""
    outputs = []
    for threads in [1, 2, 8]:
        outdir = tmp_path / f"threads_{threads}"
        args = _args("optimize", outdir, SMALL) + ["--threads", str(threads)]
        assert main(args) == EXIT_SUCCESS
        outputs.append(outdir)
    for name in ["report.json", "schedule.csv", "schedule_plot.csv"]:
        for other in outputs[1:]:
            assert _read(outputs[0] / name) == _read(other / name)


def test_compare_same_schedule(tmp_path, capsys):
    outdir = tmp_path / "out"
    overrides = SMALL + ["schedule.source=newton"]
    assert main(_args("compare", outdir, overrides)) == EXIT_SUCCESS
    table = pd.read_csv(outdir / "comparison.csv")
    assert list(table["schedule"]) == ["newton", "newton_2"]
    assert list(table["paired_difference"]) == [0.0, 0.0]
    assert os.path.exists(outdir / "comparison_curves.csv")
    assert os.path.exists(outdir / "schedule_newton.csv")
    assert "mean_hamiltonian" in capsys.readouterr().out


def test_compare_fails_when_second_is_better(tmp_path):
    outdir = tmp_path / "out"
    overrides = SMALL + [
        "schedule.source=constant",
        "schedule.constant=50.0",
        "schedule.compare=newton",
    ]
    assert main(_args("compare", outdir, overrides)) == EXIT_FAILURE
    table = pd.read_csv(outdir / "comparison.csv")
    assert table["paired_difference"].iloc[1] < 0


def test_compare_plots(tmp_path):
    outdir = tmp_path / "out"
    overrides = SMALL + ["schedule.source=newton"]
    assert main(_args("compare", outdir, overrides, plots=True)) == 0
    assert os.path.exists(outdir / "comparison.svg")


@pytest.mark.integration_test
@pytest.mark.timeout(300)
def test_verify_passes(tmp_path, capsys):
    """Five interacting particles in a small box reach the equilibrium."""
    outdir = tmp_path / "out"
    overrides = [
        "system.n=5",
        "init.box=[0, 4]",
        "seed.train=1",
    ]
    assert main(_args("verify", outdir, overrides)) == EXIT_SUCCESS
    with open(outdir / "verification.json") as fp:
        report = json.load(fp)
    assert report["passed"] is True
    table = pd.read_csv(outdir / "verification.csv")
    assert table["passed"].all()
    assert "terminal_speed" in capsys.readouterr().out


def test_verify_short_horizon_fails(tmp_path):
    outdir = tmp_path / "out"
    overrides = ["grid.horizon=0.5", "grid.steps=50"]
    assert main(_args("verify", outdir, overrides)) == EXIT_FAILURE
    with open(outdir / "verification.json") as fp:
        assert json.load(fp)["equilibrium_reached"] is False


def test_verify_with_noise(tmp_path):
    overrides = ["system.noise=true", "grid.steps=10"]
    exit_code = main(_args("verify", tmp_path / "out", overrides))
    assert exit_code == EXIT_CONFIG_ERROR


@pytest.mark.parametrize(
    "override", ["system.n=0", "system.temperature=1", "system.n=1.5"]
)
def test_configuration_error(tmp_path, capsys, override):
    exit_code = main(_args("simulate", tmp_path / "out", [override]))
    assert exit_code == EXIT_CONFIG_ERROR
    assert "Configuration error" in capsys.readouterr().err
    assert not os.path.exists(tmp_path / "out")


def test_missing_config_file(tmp_path):
    args = ["simulate", "--config", str(tmp_path / "missing.json")]
    assert main(args) == EXIT_CONFIG_ERROR


def test_invalid_log_level(tmp_path):
    args = _args("simulate", tmp_path / "out", SMALL)
    assert main(args + ["--log-level", "LOUD"]) == EXIT_CONFIG_ERROR


def test_output_is_a_file(tmp_path):
    path = tmp_path / "file"
    path.write_text("")
    assert main(_args("simulate", path, SMALL)) == EXIT_CONFIG_ERROR


def test_dump_config(tmp_path):
    path = tmp_path / "config.json"
    outdir = tmp_path / "out"
    args = _args("verify", outdir, ["grid.steps=20"]) + [
        "--dump-config",
        str(path),
    ]
    assert main(args) == EXIT_SUCCESS
    assert not os.path.exists(outdir)
    config = load_config(str(path))
    assert config == load_config(
        None, ["grid.steps=20", f"out.dir={outdir}"], preset="noise-free"
    )


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "config.json"
    outdir = tmp_path / "out"
    args = _args("simulate", outdir, SMALL) + ["--dump-config", str(path)]
    assert main(args) == EXIT_SUCCESS
    args = ["simulate", "--config", str(path), "--no-plots"]
    assert main(args) == EXIT_SUCCESS
    assert _read(path) == _read(outdir / "config.json")
