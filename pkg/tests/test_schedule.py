# -*- coding: utf-8 -*-
"""
Tests for temperature schedules and the feasible set.
"""

import numpy as np
import pandas as pd
import pytest

from lanneal.errors import ConfigurationError, DomainError
from lanneal.grid import TimeGrid
from lanneal.schedule import (
    TemperatureSchedule,
    constant_schedule,
    default_cooling_rate,
    load_schedule,
    newton_cooling_schedule,
    project_feasible,
)


@pytest.fixture()
def grid():
    return TimeGrid(horizon=10.0, n_steps=100)


def test_schedule_values_read_only():
    schedule = TemperatureSchedule([2.0, 1.0])
    with pytest.raises(ValueError):
        schedule.values[0] = 0.0


def test_schedule_outside_bounds():
    with pytest.raises(DomainError, match="outside of the bounds"):
        TemperatureSchedule([2.0, 1.0], u_min=0.0, u_max=1.5)


def test_schedule_not_monotone():
    with pytest.raises(DomainError, match="not non-increasing"):
        TemperatureSchedule([1.0, 2.0], monotone_nonincreasing=True)


@pytest.mark.parametrize("values", [[], [[1.0]], [np.nan]])
def test_schedule_invalid_values(values):
    with pytest.raises(DomainError):
        TemperatureSchedule(values)


def test_schedule_invalid_bounds():
    with pytest.raises(ConfigurationError):
        TemperatureSchedule([1.0], u_min=2.0, u_max=1.0)


def test_schedule_check_grid(grid):
    with pytest.raises(ConfigurationError, match="Schedule has 3 values"):
        TemperatureSchedule([3.0, 2.0, 1.0]).check_grid(grid)


def test_schedule_save_and_load(grid, tmp_path):
    schedule = newton_cooling_schedule(50.0, 0.0, None, grid)
    filename = tmp_path / "schedule.csv"
    schedule.save(filename, grid)
    df = pd.read_csv(filename)
    assert list(df.columns) == ["step", "time", "u"]
    loaded = load_schedule(filename, bounds=(0, 50), monotone=True, grid=grid)
    np.testing.assert_array_equal(loaded.values, schedule.values)


def test_load_schedule_missing_column(tmp_path):
    filename = tmp_path / "schedule.csv"
    pd.DataFrame({"x": [1.0]}).to_csv(filename, index=False)
    with pytest.raises(ConfigurationError, match="no `u` column"):
        load_schedule(filename)


def test_project_feasible_identity():
    u = np.array([5.0, 4.0, 4.0, 1.0])
    out = project_feasible(u, (0.0, 50.0), monotone=True)
    np.testing.assert_array_equal(out.values, u)


def test_project_feasible_pools_violators():
    out = project_feasible([1.0, 3.0], (0.0, 50.0), monotone=True)
    np.testing.assert_allclose(out.values, [2.0, 2.0])


def test_project_feasible_clamps_to_bounds():
    out = project_feasible([60.0, 40.0], (0.0, 50.0), monotone=True)
    np.testing.assert_allclose(out.values, [50.0, 40.0])


def test_project_feasible_box_only():
    out = project_feasible([-1.0, 3.0, 70.0], (0.0, 50.0), monotone=False)
    np.testing.assert_array_equal(out.values, [0.0, 3.0, 50.0])
    assert not out.monotone_nonincreasing


def test_project_feasible_invalid_bounds():
    with pytest.raises(ConfigurationError, match="greater than"):
        project_feasible([1.0], (2.0, 1.0))


def test_project_feasible_non_finite():
    with pytest.raises(DomainError):
        project_feasible([np.inf, 1.0], (0.0, 1.0))


def test_project_feasible_grid_search():
    """Compare with a search over a dense grid of two variables"""
    u_raw = np.array([0.3, 1.7])
    bounds = (0.0, 1.5)
    out = project_feasible(u_raw, bounds, monotone=True)
    g = np.linspace(*bounds, 1501)
    a, b = np.meshgrid(g, g, indexing="ij")
    feasible = b <= a
    d = (a - u_raw[0]) ** 2 + (b - u_raw[1]) ** 2
    d[~feasible] = np.inf
    k = np.unravel_index(np.argmin(d), d.shape)
    np.testing.assert_allclose(out.values, [a[k], b[k]], atol=1e-3)


@pytest.mark.parametrize("monotone", [True, False])
def test_project_feasible_optimality(rng, monotone):
    """Assert (x - p).(y - p) <= 0 for feasible y on random instances"""
    bounds = (0.0, 5.0)
    for _ in range(100):
        n = rng.integers(1, 8)
        x = rng.uniform(-3, 8, size=n)
        p = project_feasible(x, bounds, monotone=monotone).values
        y = rng.uniform(*bounds, size=(200, n))
        if monotone:
            y = -np.sort(-y, axis=1)
        assert np.all((y - p) @ (x - p) <= 1e-9)


def test_default_cooling_rate():
    assert default_cooling_rate(10.0) == pytest.approx(np.log(100) / 10)


@pytest.mark.parametrize("fraction, horizon", [(0.0, 1.0), (0.1, 0.0)])
def test_default_cooling_rate_invalid(fraction, horizon):
    with pytest.raises(ConfigurationError):
        default_cooling_rate(horizon, remaining_fraction=fraction)


def test_newton_cooling_schedule(grid):
    schedule = newton_cooling_schedule(50.0, 1.0, 0.5, grid)
    expected = 1.0 + 49.0 * np.exp(-0.5 * grid.times)
    np.testing.assert_allclose(schedule.values, expected, rtol=1e-14)
    assert schedule.monotone_nonincreasing
    assert np.all(np.diff(schedule.values) <= 0)


def test_newton_cooling_schedule_default_rate(grid):
    schedule = newton_cooling_schedule(50.0, 0.0, None, grid)
    assert schedule.values[0] == 50.0
    assert schedule.values[-1] == pytest.approx(0.5)


def test_newton_cooling_schedule_zero_horizon():
    schedule = newton_cooling_schedule(50.0, 0.0, None, TimeGrid(0.0, 0))
    np.testing.assert_array_equal(schedule.values, [50.0])


def test_newton_cooling_schedule_invalid_rate(grid):
    with pytest.raises(ConfigurationError, match="Cooling rate"):
        newton_cooling_schedule(50.0, 0.0, 0.0, grid)


def test_newton_cooling_schedule_invalid_temperatures(grid):
    with pytest.raises(ConfigurationError, match="u0 >= u_env"):
        newton_cooling_schedule(1.0, 2.0, 1.0, grid)


def test_constant_schedule(grid):
    schedule = constant_schedule(2.0, grid, bounds=(0.0, 50.0))
    assert len(schedule) == 101
    assert np.all(schedule.values == 2.0)
