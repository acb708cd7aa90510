"""General configuration for the test suite"""

import numpy as np
import pytest

from lanneal.grid import TimeGrid
from lanneal.sampling import InitialDistribution, sample_initial_state
from lanneal.system import SystemParams, SystemState

SEED = 170817


@pytest.fixture()
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture()
def params():
    """Parameters of the controlled experiment with three particles."""
    return SystemParams(n_particles=3, damping=2.0, lj_depth=3.0, lj_rmin=2.0)


@pytest.fixture()
def free_params():
    """Single particle without interactions."""
    return SystemParams(n_particles=1, damping=2.0, interactions=False)


@pytest.fixture()
def noise_free_params():
    """Parameters of the noise-free experiment."""
    return SystemParams(n_particles=20, damping=1.0, lj_depth=1.0, lj_rmin=2.0)


@pytest.fixture()
def small_grid():
    return TimeGrid(horizon=0.5, n_steps=10)


@pytest.fixture()
def state(params):
    """Three particles close enough to interact."""
    positions = np.array(
        [[0.0, 0.0, 0.0], [2.1, 0.2, 0.0], [0.5, 1.9, 0.3]]
    )
    velocities = np.array(
        [[0.1, -0.2, 0.0], [0.0, 0.3, -0.1], [-0.2, 0.0, 0.2]]
    )
    return SystemState(positions, velocities)


@pytest.fixture()
def noise_free_state(noise_free_params):
    distribution = InitialDistribution.for_system(
        noise_free_params,
        velocity="uniform",
        vel_bounds=(0.0, 1.0),
    )
    return sample_initial_state(distribution, SEED)


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "slow_integration_test: long running test at full experiment scale",
    )
    config.addinivalue_line(
        "markers", "integration_test: test of several components together"
    )
