import numpy as np
import pytest

from lanneal.grid import TimeGrid
from lanneal.objective import SaaProblem
from lanneal.sampling import NoiseRealization, draw_noise


@pytest.fixture()
def zero_noise_problem(params, state, small_grid):
    """Problem in which the objective is linear in the schedule."""
    noise = NoiseRealization.zeros(1, small_grid.n_steps, 3, small_grid.dt)
    return SaaProblem(
        params, small_grid, [state], noise, bounds=(0.5, 5.0), seed=1
    )


@pytest.fixture()
def two_step_problem(params, state):
    grid = TimeGrid(0.2, 2)
    noise = draw_noise(7, 4, 2, 3, grid.dt)
    return SaaProblem(
        params,
        grid,
        [state.translated(np.full(3, float(k))) for k in range(4)],
        noise,
        bounds=(0.0, 5.0),
        seed=7,
    )
