# -*- coding: utf-8 -*-
"""
Tests for the time-steppers and rollouts.
"""

from unittest.mock import patch

import numpy as np
import pytest

from lanneal.errors import ConfigurationError, DomainError, RolloutError
from lanneal.grid import TimeGrid
from lanneal.integrators import (
    integrate,
    rollout,
    rollout_noise_free,
    step_langevin,
    step_noise_free,
)
from lanneal.potential import total_forces
from lanneal.sampling import draw_noise
from lanneal.schedule import constant_schedule
from lanneal.system import SystemParams, SystemState


def test_step_langevin_zero_temperature_is_noise_free(state, params, rng):
    dw = rng.standard_normal((3, 3))
    assert step_langevin(state, 0.01, 0.0, dw, params) == step_noise_free(
        state, 0.01, params
    )


def test_step_noise_free_scheme(state, params):
    """Assert one step matches the implicit damping scheme"""
    dt = 0.01
    f = total_forces(state, params)
    v = (state.velocities + f * dt) / (1 + params.damping * dt)
    x = state.positions + v * dt
    new = step_noise_free(state, dt, params)
    np.testing.assert_array_equal(new.velocities, v)
    np.testing.assert_array_equal(new.positions, x)


def test_step_langevin_free_particle(free_params):
    state = SystemState([[1.0, 2.0, 3.0]], [[0.5, -0.5, 0.0]])
    dw = np.array([[0.1, 0.2, -0.3]])
    dt, u = 0.1, 2.0
    new = step_langevin(state, dt, u, dw, free_params)
    v = (state.velocities + np.sqrt(2 * free_params.damping * u) * dw) / (
        1 + free_params.damping * dt
    )
    np.testing.assert_allclose(new.velocities, v, rtol=1e-15)
    np.testing.assert_allclose(new.positions, state.positions + v * dt)


def test_step_langevin_negative_temperature(state, params):
    with pytest.raises(DomainError, match="non-negative"):
        step_langevin(state, 0.01, -1.0, np.zeros((3, 3)), params)


def test_step_langevin_wrong_increment_shape(state, params):
    with pytest.raises(DomainError, match="Increments must have shape"):
        step_langevin(state, 0.01, 1.0, np.zeros((2, 3)), params)


def test_step_invalid_dt(state, params):
    with pytest.raises(DomainError, match="dt must be positive"):
        step_noise_free(state, 0.0, params)


def test_integrate_shapes(state, params, small_grid):
    positions, velocities = integrate(
        state, np.zeros(11), None, small_grid, params
    )
    assert positions.shape == (11, 3, 3)
    assert velocities.shape == (11, 3, 3)
    np.testing.assert_array_equal(positions[0], state.positions)


def test_integrate_wrong_schedule_length(state, params, small_grid):
    with pytest.raises(ConfigurationError, match="Schedule has 5 values"):
        integrate(state, np.zeros(5), None, small_grid, params)


def test_integrate_wrong_noise_shape(state, params, small_grid):
    with pytest.raises(DomainError, match="Noise path has shape"):
        integrate(state, np.ones(11), np.zeros((5, 3, 3)), small_grid, params)


def test_integrate_reports_failed_step(state, params, small_grid):
    side_effect = [np.zeros((3, 3)), DomainError("Particles 0 and 1")]
    with patch("lanneal.integrators.total_forces", side_effect=side_effect):
        with pytest.raises(RolloutError, match=r"\(sample 4, step 1\)") as e:
            integrate(state, np.zeros(11), None, small_grid, params, sample=4)
    assert e.value.step == 1
    assert e.value.sample == 4


def test_rollout_deterministic(state, params, small_grid):
    noise = draw_noise(1, 1, 10, 3, small_grid.dt).path(0)
    schedule = constant_schedule(1.0, small_grid)
    a = rollout(state, schedule, noise, small_grid, params)
    b = rollout(state, schedule, noise, small_grid, params)
    np.testing.assert_array_equal(a.positions, b.positions)
    np.testing.assert_array_equal(a.hamiltonians, b.hamiltonians)
    assert a.noisy


def test_rollout_noise_free_record(state, params, small_grid):
    traj = rollout_noise_free(state, small_grid, params)
    assert not traj.noisy
    assert not traj.controls.any()
    np.testing.assert_allclose(
        traj.hamiltonians, traj.recompute_hamiltonians(params), rtol=1e-14
    )
    assert np.all(traj.min_pair_distance > 0)


def test_rollout_schedule_without_noise(state, params, small_grid):
    """Controls are not recorded when no noise is applied"""
    schedule = constant_schedule(5.0, small_grid)
    traj = rollout(state, schedule, None, small_grid, params)
    assert not traj.noisy
    assert not traj.controls.any()


def test_rollout_zero_schedule_with_noise_is_noise_free(
    state, params, small_grid
):
    noise = draw_noise(1, 1, 10, 3, small_grid.dt).path(0)
    schedule = constant_schedule(0.0, small_grid)
    traj = rollout(state, schedule, noise, small_grid, params)
    reference = rollout_noise_free(state, small_grid, params)
    assert not traj.noisy
    np.testing.assert_array_equal(traj.positions, reference.positions)


def test_rollout_zero_steps(state, params):
    grid = TimeGrid(horizon=0.0, n_steps=0)
    traj = rollout_noise_free(state, grid, params)
    assert len(traj) == 1
    assert traj.final_state == state


def test_noise_free_hamiltonian_decreases(state, params):
    grid = TimeGrid(horizon=2.0, n_steps=2000)
    traj = rollout_noise_free(state, grid, params)
    assert traj.hamiltonians[-1] < traj.hamiltonians[0]


def _final_positions_error(run, n_steps, n_reference):
    reference = run(n_reference)
    return [
        np.sqrt(np.mean((run(n) - reference) ** 2)) for n in n_steps
    ]


def test_noise_free_first_order(state, params):
    """Halving the step halves the error of the final positions."""

    def run(n):
        traj = rollout_noise_free(state, TimeGrid(1.0, n), params)
        return traj.positions[-1]

    errors = _final_positions_error(run, [100, 200, 400], 3200)
    assert 1.7 <= errors[0] / errors[1] <= 2.3
    assert 1.7 <= errors[1] / errors[2] <= 2.3


def test_langevin_strong_first_order(state, params):
    """With additive noise the error on a common Brownian path is first
    order in the step."""
    n_reference = 3200
    n_paths = 20
    fine = draw_noise(5, n_paths, n_reference, 3, 1.0 / n_reference)

    def run(n):
        grid = TimeGrid(1.0, n)
        schedule = constant_schedule(1.0, grid)
        factor = n_reference // n
        finals = []
        for k in range(n_paths):
            increments = fine.path(k).reshape(n, factor, 3, 3).sum(axis=1)
            traj = rollout(state, schedule, increments, grid, params)
            finals.append(traj.positions[-1])
        return np.array(finals)

    errors = _final_positions_error(run, [100, 200, 400], n_reference)
    assert 1.6 <= errors[0] / errors[1] <= 2.6
    assert 1.6 <= errors[1] / errors[2] <= 2.6


def test_rollout_translation_invariant(state, params, small_grid):
    shift = np.array([3.0, -1.0, 2.0])
    a = rollout_noise_free(state, small_grid, params)
    b = rollout_noise_free(state.translated(shift), small_grid, params)
    np.testing.assert_allclose(b.positions - shift, a.positions, atol=1e-12)
    np.testing.assert_allclose(b.hamiltonians, a.hamiltonians, rtol=1e-10)


def test_free_particle_stationary_variance():
    """Velocity variance of a free particle tends to the temperature"""
    params = SystemParams(n_particles=1, damping=2.0, interactions=False)
    grid = TimeGrid(horizon=500.0, n_steps=50000)
    u = 5.0
    noise = draw_noise(11, 1, grid.n_steps, 1, grid.dt).path(0)
    schedule = constant_schedule(u, grid)
    _, velocities = integrate(
        SystemState(np.zeros((1, 3))), schedule.values, noise, grid, params
    )
    burn_in = 1000
    variance = np.var(velocities[burn_in:, 0, :])
    assert variance == pytest.approx(u, rel=0.1)
