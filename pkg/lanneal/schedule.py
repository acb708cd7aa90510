# -*- coding: utf-8 -*-
"""
Temperature schedules and the feasible set of the schedule optimisation.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import isotonic_regression

from .errors import ConfigurationError, DomainError
from .grid import TimeGrid
from .utils.io import load_dataframe, save_dataframe

logger = logging.getLogger(__name__)


def _check_bounds(bounds) -> Tuple[float, float]:
    u_min, u_max = (float(b) for b in bounds)
    if not np.isfinite(u_min) or np.isnan(u_max):
        raise ConfigurationError(f"Invalid bounds: {bounds}")
    if u_min > u_max:
        raise ConfigurationError(
            f"Lower bound {u_min} is greater than upper bound {u_max}"
        )
    return u_min, u_max


@dataclass(frozen=True, eq=False)
class TemperatureSchedule:
    """Temperature :math:`u(t_n)` on a uniform time grid.

    :math:`u(t_0)` is only used for reporting, step :math:`n` of the
    dynamics uses :math:`u(t_{n+1})`.

    Parameters
    ----------
    values : numpy.ndarray
        Values :math:`u(t_0), \\dots, u(t_{N_T})`.
    u_min, u_max : float
        Box bounds.
    monotone_nonincreasing : bool
        If True, the values must be non-increasing in time.
    """

    values: np.ndarray
    u_min: float = 0.0
    u_max: float = np.inf
    monotone_nonincreasing: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("Schedule values must be a non-empty 1-D array")
        if not np.isfinite(values).all():
            raise DomainError("Schedule contains non-finite values")
        if self.u_min > self.u_max:
            raise ConfigurationError(
                f"Lower bound {self.u_min} is greater than upper bound "
                f"{self.u_max}"
            )
        if self.u_min < 0:
            raise ConfigurationError("Temperatures must be non-negative")
        if values.min() < self.u_min or values.max() > self.u_max:
            raise DomainError(
                f"Schedule values outside of the bounds "
                f"[{self.u_min}, {self.u_max}]"
            )
        if self.monotone_nonincreasing and np.any(np.diff(values) > 0):
            raise DomainError("Schedule is not non-increasing")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @property
    def n_steps(self) -> int:
        return len(self.values) - 1

    @property
    def bounds(self) -> Tuple[float, float]:
        return self.u_min, self.u_max

    def check_grid(self, grid: TimeGrid) -> None:
        """Check the schedule is defined on a grid.

        Raises
        ------
        ConfigurationError
            If the number of values does not match the grid.
        """
        if len(self.values) != grid.n_steps + 1:
            raise ConfigurationError(
                f"Schedule has {len(self.values)} values but the grid has "
                f"{grid.n_steps + 1} points"
            )

    def to_frame(self, grid: TimeGrid) -> pd.DataFrame:
        """Data frame with columns :code:`step,time,u`."""
        self.check_grid(grid)
        return pd.DataFrame(
            {
                "step": np.arange(grid.n_steps + 1),
                "time": grid.times,
                "u": self.values,
            }
        )

    def save(self, filename: str, grid: TimeGrid) -> None:
        """Save the schedule to a CSV file."""
        save_dataframe(self.to_frame(grid), filename)

    def asdict(self) -> dict:
        return dict(
            values=self.values,
            u_min=self.u_min,
            u_max=self.u_max,
            monotone_nonincreasing=self.monotone_nonincreasing,
        )


def load_schedule(
    filename: str,
    bounds=(0.0, np.inf),
    monotone: bool = False,
    grid: Optional[TimeGrid] = None,
) -> TemperatureSchedule:
    """Load a schedule from a CSV file with a column :code:`u`.

    Parameters
    ----------
    filename : str
        Path to the file.
    bounds : tuple
        Bounds the schedule must satisfy.
    monotone : bool
        Whether the schedule must be non-increasing.
    grid : :obj:`lanneal.grid.TimeGrid`, optional
        If given, the schedule must be defined on this grid.
    """
    df = load_dataframe(filename)
    if "u" not in df.columns:
        raise ConfigurationError(f"Schedule file {filename} has no `u` column")
    u_min, u_max = _check_bounds(bounds)
    schedule = TemperatureSchedule(
        df["u"].to_numpy(dtype=float),
        u_min=u_min,
        u_max=u_max,
        monotone_nonincreasing=monotone,
    )
    if grid is not None:
        schedule.check_grid(grid)
    return schedule


def project_feasible(
    u_raw, bounds, monotone: bool = False
) -> TemperatureSchedule:
    """Euclidean projection onto the feasible set of schedules.

    The feasible set is the box :math:`u_{min} \\leq u \\leq u_{max}`,
    intersected with the non-increasing sequences if :code:`monotone` is
    True. The projection onto the non-increasing sequences is an antitonic
    regression (pool adjacent violators) and clamping the result to the
    bounds is then exact.

    Parameters
    ----------
    u_raw : array_like
        Values to project.
    bounds : tuple
        Lower and upper bounds.
    monotone : bool
        Include the non-increasing constraint.

    Returns
    -------
    :obj:`TemperatureSchedule`
        The projected schedule.

    Raises
    ------
    ConfigurationError
        If the lower bound exceeds the upper bound.
    """
    u_min, u_max = _check_bounds(bounds)
    u = np.asarray(u_raw, dtype=float)
    if not np.isfinite(u).all():
        raise DomainError("Cannot project non-finite values")
    if monotone and u.size > 1:
        u = isotonic_regression(u, increasing=False).x
    u = np.clip(u, u_min, u_max)
    return TemperatureSchedule(
        u, u_min=u_min, u_max=u_max, monotone_nonincreasing=monotone
    )


def default_cooling_rate(
    horizon: float, remaining_fraction: float = 0.01
) -> float:
    """Cooling rate such that only a fraction of the initial temperature
    difference remains at the horizon."""
    if not 0 < remaining_fraction < 1:
        raise ConfigurationError("remaining_fraction must be in (0, 1)")
    if not horizon > 0:
        raise ConfigurationError("horizon must be positive")
    return float(np.log(1.0 / remaining_fraction) / horizon)


def newton_cooling_schedule(
    u0: float,
    u_env: float,
    rate_k: Optional[float],
    grid: TimeGrid,
    bounds=None,
) -> TemperatureSchedule:
    """Schedule following Newton's law of cooling.

    .. math::

        u(t) = u_{env} + (u_0 - u_{env}) e^{-k t}

    Parameters
    ----------
    u0 : float
        Initial temperature.
    u_env : float
        Temperature of the environment.
    rate_k : float or None
        Cooling rate :math:`k`. If None, the rate is chosen such that
        :math:`u(T) = u_{env} + 0.01 (u_0 - u_{env})`. For a grid without
        steps the schedule is :math:`u_0`.
    grid : :obj:`lanneal.grid.TimeGrid`
        Time grid.
    bounds : tuple, optional
        Bounds of the schedule. The values are clipped to the bounds. If not
        specified, the bounds are :code:`(u_env, u0)`.

    Returns
    -------
    :obj:`TemperatureSchedule`
        Non-increasing schedule.
    """
    if not u0 >= u_env >= 0:
        raise ConfigurationError(
            f"Require u0 >= u_env >= 0, got u0={u0}, u_env={u_env}"
        )
    if rate_k is None:
        # A zero-step grid only holds u(0) = u0, any rate gives the same
        rate_k = (
            default_cooling_rate(grid.horizon) if grid.horizon > 0 else 1.0
        )
    if not rate_k > 0:
        raise ConfigurationError(
            f"Cooling rate must be positive, got {rate_k}"
        )
    values = u_env + (u0 - u_env) * np.exp(-rate_k * grid.times)
    if bounds is None:
        bounds = (u_env, u0)
    u_min, u_max = _check_bounds(bounds)
    values = np.clip(values, u_min, u_max)
    return TemperatureSchedule(
        values, u_min=u_min, u_max=u_max, monotone_nonincreasing=True
    )


def constant_schedule(
    value: float, grid: TimeGrid, bounds=None, monotone: bool = False
) -> TemperatureSchedule:
    """Schedule with the same temperature at every grid time."""
    if bounds is None:
        bounds = (0.0, max(value, 0.0))
    u_min, u_max = _check_bounds(bounds)
    return TemperatureSchedule(
        np.full(grid.n_steps + 1, float(value)),
        u_min=u_min,
        u_max=u_max,
        monotone_nonincreasing=monotone,
    )
