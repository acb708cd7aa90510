# -*- coding: utf-8 -*-
"""
Time-steppers for the noise-free and the noisy (Langevin) dynamics.

Both steppers use the same scheme: the damping is implicit and the forces
are explicit,

.. math::

    V_{n+1} = \\frac{V_n + f(X_n) \\Delta t
        + \\sqrt{2 B u(t_{n+1})} \\Delta W_n}{1 + B \\Delta t},
    \\qquad X_{n+1} = X_n + V_{n+1} \\Delta t,

which reduces to the noise-free scheme for :math:`u = 0`.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigurationError, DomainError, RolloutError
from .grid import TimeGrid
from .potential import hamiltonian, total_forces
from .system import SystemParams, SystemState
from .trajectory import TrajectoryRecord
from .utils.distance import min_pair_distance

logger = logging.getLogger(__name__)


def _advance(
    state: SystemState,
    dt: float,
    params: SystemParams,
    kick: Optional[np.ndarray] = None,
) -> SystemState:
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    forces = total_forces(state, params)
    v = state.velocities + forces * dt
    if kick is not None:
        v = v + kick
    v = v / (1.0 + params.damping * dt)
    x = state.positions + v * dt
    return SystemState(x, v)


def step_noise_free(
    state: SystemState, dt: float, params: SystemParams
) -> SystemState:
    """Advance the noise-free dynamics by one step.

    Parameters
    ----------
    state : :obj:`lanneal.system.SystemState`
        Current state.
    dt : float
        Step size.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.

    Returns
    -------
    :obj:`lanneal.system.SystemState`
        State after one step.
    """
    return _advance(state, dt, params)


def step_langevin(
    state: SystemState,
    dt: float,
    u_next: float,
    dw,
    params: SystemParams,
) -> SystemState:
    """Advance the Langevin dynamics by one step.

    Parameters
    ----------
    state : :obj:`lanneal.system.SystemState`
        Current state.
    dt : float
        Step size.
    u_next : float
        Temperature at the end of the step, :math:`u(t_{n+1})`.
    dw : array_like
        Wiener increments with shape (N, 3) and variance :code:`dt`.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.

    Returns
    -------
    :obj:`lanneal.system.SystemState`
        State after one step. Identical to :py:func:`step_noise_free` when
        :code:`u_next` is zero.

    Raises
    ------
    DomainError
        If the temperature is negative or the increments have the wrong
        shape.
    """
    if not u_next >= 0:
        raise DomainError(f"Temperature must be non-negative, got {u_next}")
    dw = np.asarray(dw, dtype=float)
    if dw.shape != state.positions.shape:
        raise DomainError(
            f"Increments must have shape {state.positions.shape}, got "
            f"{dw.shape}"
        )
    if u_next == 0:
        return _advance(state, dt, params)
    kick = np.sqrt(2.0 * params.damping * u_next) * dw
    return _advance(state, dt, params, kick=kick)


def _check_controls(values, grid: TimeGrid) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n_steps + 1,):
        raise ConfigurationError(
            f"Schedule has {values.size} values but the grid has "
            f"{grid.n_steps + 1} points"
        )
    return values


def integrate(
    initial: SystemState,
    controls,
    increments: Optional[np.ndarray],
    grid: TimeGrid,
    params: SystemParams,
    sample: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Integrate the dynamics and return the positions and velocities.

    Parameters
    ----------
    initial : :obj:`lanneal.system.SystemState`
        Initial state.
    controls : array_like
        Temperature at every grid time. Step :math:`n` uses entry
        :math:`n + 1`.
    increments : numpy.ndarray or None
        Wiener increments with shape (N_T, N, 3). If None, the dynamics are
        noise-free regardless of the controls.
    grid : :obj:`lanneal.grid.TimeGrid`
        Time grid.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    sample : int, optional
        Index of the sample path, included in errors.

    Returns
    -------
    positions, velocities : numpy.ndarray
        Arrays with shape (N_T + 1, N, 3).

    Raises
    ------
    RolloutError
        If a step fails. The error includes the step index.
    """
    initial.check_compatible(params)
    controls = _check_controls(controls, grid)
    expected = (grid.n_steps,) + initial.positions.shape
    if increments is not None and increments.shape != expected:
        raise DomainError(
            f"Noise path has shape {increments.shape}, expected {expected}"
        )
    dt = grid.dt
    positions = np.empty((grid.n_steps + 1,) + initial.positions.shape)
    velocities = np.empty_like(positions)
    positions[0] = initial.positions
    velocities[0] = initial.velocities
    state = initial
    for n in range(grid.n_steps):
        try:
            if increments is None:
                state = step_noise_free(state, dt, params)
            else:
                state = step_langevin(
                    state, dt, controls[n + 1], increments[n], params
                )
        except DomainError as e:
            raise RolloutError(str(e), step=n, sample=sample) from e
        positions[n + 1] = state.positions
        velocities[n + 1] = state.velocities
    return positions, velocities


def rollout(
    initial: SystemState,
    schedule,
    noise_path: Optional[np.ndarray],
    grid: TimeGrid,
    params: SystemParams,
    sample: Optional[int] = None,
) -> TrajectoryRecord:
    """Roll out the dynamics and record the states and diagnostics.

    Parameters
    ----------
    initial : :obj:`lanneal.system.SystemState`
        Initial state.
    schedule : :obj:`lanneal.schedule.TemperatureSchedule` or array_like
        Temperature schedule defined on the grid. If None, the rollout is
        noise-free.
    noise_path : numpy.ndarray or None
        Wiener increments of one sample path with shape (N_T, N, 3). If
        None, the rollout is noise-free.
    grid : :obj:`lanneal.grid.TimeGrid`
        Time grid.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    sample : int, optional
        Index of the sample path, included in errors.

    Returns
    -------
    :obj:`lanneal.trajectory.TrajectoryRecord`
        Record with the state, Hamiltonian and smallest pair distance at
        every grid time.
    """
    if schedule is None:
        controls = np.zeros(grid.n_steps + 1)
    else:
        controls = _check_controls(getattr(schedule, "values", schedule), grid)
    noisy = noise_path is not None and bool(np.any(controls[1:] > 0))
    kind = "noisy" if noisy else "noise-free"
    logger.debug(f"Rolling out {grid.n_steps} steps ({kind})")
    positions, velocities = integrate(
        initial, controls, noise_path, grid, params, sample=sample
    )
    if noise_path is None:
        controls = np.zeros_like(controls)
    hamiltonians = np.empty(grid.n_steps + 1)
    min_distance = np.empty(grid.n_steps + 1)
    for n in range(grid.n_steps + 1):
        state = SystemState(positions[n], velocities[n])
        try:
            hamiltonians[n] = hamiltonian(state, params)
        except DomainError as e:
            raise RolloutError(str(e), step=n, sample=sample) from e
        min_distance[n] = min_pair_distance(positions[n])
    return TrajectoryRecord(
        times=grid.times,
        positions=positions,
        velocities=velocities,
        hamiltonians=hamiltonians,
        min_pair_distance=min_distance,
        controls=controls,
        noisy=noisy,
    )


def rollout_noise_free(
    initial: SystemState, grid: TimeGrid, params: SystemParams
) -> TrajectoryRecord:
    """Roll out the noise-free dynamics."""
    return rollout(initial, None, None, grid, params)
