# -*- coding: utf-8 -*-
"""
Testing the plotting functions.
"""

import os
from unittest.mock import patch

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import pytest

from lanneal import config, plot
from lanneal.system import SystemState


@pytest.fixture(autouse=True)
def auto_close_figures():
    """Automatically close all figures after each test"""
    yield
    plt.close("all")


@pytest.fixture()
def times():
    return np.linspace(0, 1, 11)


@pytest.mark.parametrize("line_styles", [True, False])
def test_lanneal_style_enabled(line_styles):
    """Assert the style is applied with config.plotting.disable_style=False"""

    def func(a, b):
        return a + b

    with (
        patch("lanneal.plot.config.plotting.disable_style", False),
        patch("seaborn.axes_style") as mock_style,
        patch("matplotlib.rc_context") as mock_rc,
    ):
        out = plot.lanneal_style(line_styles=line_styles)(func)(1, 2)
    assert out == 3
    mock_style.assert_called_once_with(config.plotting.sns_style)
    d = mock_rc.call_args[0][0]
    assert d["svg.hashsalt"] == "lanneal"
    cycle = d["axes.prop_cycle"].by_key()
    assert cycle["color"] == config.plotting.line_colours
    if line_styles:
        assert cycle["linestyle"] == config.plotting.line_styles
    else:
        assert "linestyle" not in cycle


def test_lanneal_style_disabled():
    """Assert the style isn't applied when disabled"""

    def func(a, b):
        return a + b

    with (
        patch("lanneal.plot.config.plotting.disable_style", True),
        patch("seaborn.axes_style") as mock_style,
    ):
        out = plot.lanneal_style(func)(1, 2)
    assert out == 3
    mock_style.assert_not_called()


def test_plot_hamiltonian(times):
    fig = plot.plot_hamiltonian(times, np.exp(-times))
    assert isinstance(fig, plt.Figure)
    assert len(fig.axes[0].lines) == 1


def test_plot_hamiltonian_multiple(times):
    h = np.vstack([np.exp(-times), np.exp(-2 * times)])
    fig = plot.plot_hamiltonian(times, h, labels=["a", "b"])
    assert len(fig.axes[0].lines) == 2
    assert fig.axes[0].get_legend() is not None


def test_plot_schedules(times, tmp_path):
    filename = os.path.join(tmp_path, "schedule.svg")
    out = plot.plot_schedules(
        times,
        {"a": 5 * np.exp(-times), "b": np.ones_like(times)},
        filename=filename,
        bounds=(0.0, np.inf),
    )
    assert out is None
    assert os.path.exists(filename)


def test_plot_schedules_is_reproducible(times, tmp_path):
    files = [os.path.join(tmp_path, f"{i}.svg") for i in range(2)]
    for f in files:
        plot.plot_schedules(times, {"a": np.exp(-times)}, filename=f)
    with open(files[0], "rb") as a, open(files[1], "rb") as b:
        assert a.read() == b.read()


def test_plot_comparison(times):
    curves = pd.DataFrame(
        {"time": times, "newton": np.exp(-times), "optimized": -times}
    )
    fig = plot.plot_comparison(curves, stderr={"newton": 0.1})
    labels = [line.get_label() for line in fig.axes[0].get_lines()]
    assert "newton" in labels
    assert "optimized" in labels
    assert "time" not in labels


def test_plot_state(state, tmp_path):
    filename = os.path.join(tmp_path, "state.svg")
    final = SystemState(state.positions + 1.0)
    plot.plot_state(state, final, filename=filename)
    assert os.path.exists(filename)
