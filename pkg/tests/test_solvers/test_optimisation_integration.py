# -*- coding: utf-8 -*-
"""Integration tests for the schedule optimisation"""

import numpy as np
import pytest

from lanneal.grid import TimeGrid
from lanneal.objective import SaaProblem, compare_schedules
from lanneal.sampling import InitialDistribution
from lanneal.schedule import newton_cooling_schedule
from lanneal.solvers import SolverOptions, optimize_schedule
from lanneal.system import SystemParams


@pytest.mark.integration_test
@pytest.mark.timeout(600)
def test_optimized_schedule_beats_newton_cooling():
    """Scaled controlled experiment: the optimised schedule has a lower mean
    terminal Hamiltonian on held-out paths than Newton cooling.

    The step is small enough for the explicit force step to stay stable in
    collisions at the largest temperature.
    """
    params = SystemParams(n_particles=10, damping=2.0, lj_depth=3.0)
    grid = TimeGrid(horizon=2.0, n_steps=200)
    bounds = (0.0, 50.0)
    distribution = InitialDistribution.for_system(params)
    problem = SaaProblem.draw(
        params, grid, 20, 1234, distribution=distribution, bounds=bounds
    )
    newton = newton_cooling_schedule(50.0, 0.0, None, grid, bounds=bounds)
    report = optimize_schedule(
        problem, init=newton, options=SolverOptions(max_iter=50)
    )
    assert np.all(np.diff(report.schedule.values) <= 0)
    assert report.final_objective < report.objective_history[0]
    assert np.all(np.isfinite(report.objective_history))

    comparison = compare_schedules(
        {"newton": newton, "optimized": report.schedule},
        params,
        grid,
        200,
        5678,
        distribution=distribution,
    )
    difference, stderr = comparison.differences["optimized"]
    assert difference <= -stderr
