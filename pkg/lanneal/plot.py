# -*- coding: utf-8 -*-
"""
Plotting utilities.
"""

import functools
import logging
from typing import Dict, Optional

import matplotlib as mpl
import numpy as np
import seaborn as sns
from cycler import cycler
from matplotlib import pyplot as plt

from . import config

logger = logging.getLogger(__name__)

_rcparams = sns.plotting_context("notebook")
_rcparams.update(
    {
        "legend.frameon": False,
        "svg.hashsalt": "lanneal",
    }
)


def lanneal_style(line_styles=True):
    """Decorator for plotting function that sets the style.

    Functions as both standard decorator :code:`@lanneal_style` or as a
    callable decorator :code:`@lanneal_style()`.

    Style can be disabled by setting
    :py:attr:`lanneal.config.PlottingConfig.disable_style` to :code:`True`.

    Parameters
    ----------
    line_styles : boolean
        Use custom line styles.
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            if config.plotting.disable_style:
                return func(*args, **kwargs)
            c = cycler(color=config.plotting.line_colours)
            if line_styles:
                c += cycler(linestyle=config.plotting.line_styles)
            d = {
                "axes.prop_cycle": c,
            }
            with (
                sns.axes_style(config.plotting.sns_style),
                mpl.rc_context({**_rcparams, **d}),
            ):
                return func(*args, **kwargs)

        return wrapper

    if callable(line_styles):
        return decorator(line_styles)
    else:
        return decorator


def _finalise(fig, filename):
    if filename is not None:
        fig.savefig(
            filename,
            bbox_inches="tight",
            format=config.plotting.file_extension,
            metadata={"Date": None},
        )
        plt.close(fig)
    else:
        return fig


@lanneal_style
def plot_hamiltonian(times, hamiltonians, filename=None, labels=None):
    """Plot the Hamiltonian as a function of time.

    Parameters
    ----------
    times : array_like
        Grid times.
    hamiltonians : array_like
        Hamiltonian at every grid time. A 2-d array is plotted as one line per
        row.
    filename : str, optional
        Path for saving the figure. If not specified figure is returned
        instead.
    labels : list, optional
        Labels for each line.
    """
    h = np.atleast_2d(hamiltonians)
    fig, ax = plt.subplots()
    for i, row in enumerate(h):
        label = labels[i] if labels is not None else None
        ax.plot(times, row, label=label)
    ax.set_xlabel(r"$t$")
    ax.set_ylabel(r"$H(t)$")
    if labels is not None:
        ax.legend()
    fig.tight_layout()
    return _finalise(fig, filename)


@lanneal_style
def plot_schedules(
    times, schedules: Dict[str, np.ndarray], filename=None, bounds=None
):
    """Plot temperature schedules.

    Parameters
    ----------
    times : array_like
        Grid times.
    schedules : dict
        Schedule values keyed by label.
    filename : str, optional
        Path for saving the figure.
    bounds : tuple, optional
        Bounds drawn as horizontal lines.
    """
    fig, ax = plt.subplots()
    for label, values in schedules.items():
        ax.plot(times, values, label=label)
    if bounds is not None:
        for b in bounds:
            if np.isfinite(b):
                ax.axhline(b, c="grey", lw=0.8, ls=":")
    ax.set_xlabel(r"$t$")
    ax.set_ylabel(r"$u(t)$")
    ax.legend()
    fig.tight_layout()
    return _finalise(fig, filename)


@lanneal_style
def plot_comparison(curves, filename=None, stderr: Optional[dict] = None):
    """Plot the mean Hamiltonian of several schedules on common paths.

    Parameters
    ----------
    curves : pandas.DataFrame
        Data frame with a :code:`time` column and one column per schedule,
        see :py:meth:`lanneal.objective.ScheduleComparison.curves_frame`.
    filename : str, optional
        Path for saving the figure.
    stderr : dict, optional
        Standard error of :math:`H(T)` for each schedule, shown as an error
        bar at the final time.
    """
    fig, ax = plt.subplots()
    t = curves["time"].to_numpy()
    for name in curves.columns:
        if name == "time":
            continue
        line = ax.plot(t, curves[name], label=name)[0]
        if stderr is not None and name in stderr:
            ax.errorbar(
                t[-1],
                curves[name].iloc[-1],
                yerr=stderr[name],
                c=line.get_color(),
                capsize=3,
            )
    ax.set_xlabel(r"$t$")
    ax.set_ylabel(r"$\bar{H}(t)$")
    ax.legend()
    fig.tight_layout()
    return _finalise(fig, filename)


@lanneal_style(line_styles=False)
def plot_state(initial, final, filename=None):
    """Plot the particle positions at the initial and final times.

    Parameters
    ----------
    initial, final : :obj:`lanneal.system.SystemState`
        States to plot.
    filename : str, optional
        Path for saving the figure.
    """
    fig = plt.figure(figsize=(10, 5))
    for i, (state, title) in enumerate(
        [(initial, "Initial"), (final, "Final")]
    ):
        ax = fig.add_subplot(1, 2, i + 1, projection="3d")
        x = state.positions
        ax.scatter(
            x[:, 0], x[:, 1], x[:, 2], c=config.plotting.base_colour, s=40
        )
        ax.set_title(title)
        ax.set_xlabel(r"$x$")
        ax.set_ylabel(r"$y$")
        ax.set_zlabel(r"$z$")
    fig.tight_layout()
    return _finalise(fig, filename)
