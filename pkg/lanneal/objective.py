# -*- coding: utf-8 -*-
"""
Sample-average approximation of the expected terminal Hamiltonian.

For a schedule :math:`u` and :math:`M` fixed sample paths the objective is

.. math::

    J(u) = \\frac{1}{M} \\sum_{k=1}^{M} \\Big[ H^k(0)
        - B \\Delta t \\sum_{n=1}^{N_T} \\sum_{i=1}^{N} \\|V_i^k(t_n)\\|^2
        \\Big] + c B \\Delta t \\sum_{n=1}^{N_T} u(t_n),

where :math:`c = 3N` is the number of velocity components that receive
thermal noise. With :code:`literal_heating=True`, :math:`c = N`.

The gradient is computed by reverse-mode accumulation through the
recursion of the integrator with the noise held fixed.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from . import config
from .errors import ConfigurationError, DomainError, RolloutError
from .grid import TimeGrid
from .integrators import integrate
from .potential import force_jacobian_product, hamiltonian
from .sampling import (
    InitialDistribution,
    NoiseRealization,
    draw_noise,
    sample_initial_states,
)
from .schedule import TemperatureSchedule
from .system import DIMENSION, SystemParams, SystemState
from .utils.multiprocessing import batch_evaluate, create_pool
from .utils.stats import mean_and_stderr, paired_difference

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SaaProblem:
    """Sample-average approximation of the schedule optimisation problem.

    Parameters
    ----------
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    grid : :obj:`lanneal.grid.TimeGrid`
        Time grid.
    initial_states : tuple
        Initial state of every sample path.
    noise : :obj:`lanneal.sampling.NoiseRealization`
        Wiener increments of every sample path.
    bounds : tuple
        Bounds on the temperature.
    monotone : bool
        Whether the schedule must be non-increasing.
    literal_heating : bool
        If True, the heating term counts one noise component per particle
        instead of three.
    seed : int, optional
        Seed used to draw the sample paths.
    """

    params: SystemParams
    grid: TimeGrid
    initial_states: Tuple[SystemState, ...]
    noise: NoiseRealization
    bounds: Tuple[float, float] = (0.0, 50.0)
    monotone: bool = True
    literal_heating: bool = False
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "initial_states", tuple(self.initial_states))
        m = len(self.initial_states)
        if m < 1:
            raise ConfigurationError("At least one sample path is required")
        expected = (
            m,
            self.grid.n_steps,
            self.params.n_particles,
            DIMENSION,
        )
        if self.noise.increments.shape != expected:
            raise ConfigurationError(
                f"Noise has shape {self.noise.increments.shape}, expected "
                f"{expected}"
            )
        for state in self.initial_states:
            state.check_compatible(self.params)
        if self.bounds[0] > self.bounds[1]:
            raise ConfigurationError(f"Invalid bounds: {self.bounds}")

    @classmethod
    def draw(
        cls,
        params: SystemParams,
        grid: TimeGrid,
        n_samples: int,
        seed: int,
        distribution: Optional[InitialDistribution] = None,
        **kwargs,
    ) -> "SaaProblem":
        """Draw the initial states and noise of a problem from a seed.

        Parameters
        ----------
        params : :obj:`lanneal.system.SystemParams`
            System parameters.
        grid : :obj:`lanneal.grid.TimeGrid`
            Time grid.
        n_samples : int
            Number of sample paths :math:`M`.
        seed : int
            Seed for the initial states and the noise.
        distribution : :obj:`lanneal.sampling.InitialDistribution`, optional
            Distribution of the initial states. Defaults to uniform positions
            in :math:`[0, 10]^3` and Gaussian velocities with variance 4.
        kwargs :
            Keyword arguments passed to the class.
        """
        if n_samples < 1:
            raise ConfigurationError("n_samples must be at least 1")
        if distribution is None:
            distribution = InitialDistribution.for_system(params)
        logger.debug(f"Drawing {n_samples} sample paths with seed {seed}")
        initial_states = sample_initial_states(distribution, seed, n_samples)
        noise = draw_noise(
            seed, n_samples, grid.n_steps, params.n_particles, grid.dt
        )
        return cls(
            params=params,
            grid=grid,
            initial_states=initial_states,
            noise=noise,
            seed=seed,
            **kwargs,
        )

    @property
    def n_samples(self) -> int:
        return len(self.initial_states)

    @property
    def heating_coefficient(self) -> float:
        """Coefficient of :math:`\\sum_n u(t_n)` in the objective."""
        components = 1 if self.literal_heating else DIMENSION
        return (
            components
            * self.params.n_particles
            * self.params.damping
            * self.grid.dt
        )

    def check_controls(self, values) -> np.ndarray:
        values = np.asarray(getattr(values, "values", values), dtype=float)
        if values.shape != (self.grid.n_steps + 1,):
            raise ConfigurationError(
                f"Schedule has {values.size} values but the grid has "
                f"{self.grid.n_steps + 1} points"
            )
        if np.any(values < 0):
            raise DomainError("Temperatures must be non-negative")
        return values


def _velocity_term(problem: SaaProblem, velocities) -> float:
    return (
        -problem.params.damping
        * problem.grid.dt
        * float(np.sum(velocities[1:] ** 2))
    )


def _integrate_sample(problem: SaaProblem, k: int, values):
    return integrate(
        problem.initial_states[k],
        values,
        problem.noise.path(k),
        problem.grid,
        problem.params,
        sample=k,
    )


def _sample_objective(problem: SaaProblem, item) -> float:
    """Control-dependent part of sample k without the heating term."""
    k, values = item
    _, velocities = _integrate_sample(problem, k, values)
    h0 = hamiltonian(problem.initial_states[k], problem.params)
    return h0 + _velocity_term(problem, velocities)


def _sample_objective_and_gradient(problem: SaaProblem, item):
    """Objective of sample k and its gradient with respect to the noise
    amplitudes :math:`a_n = \\sqrt{2 B u(t_n)}` for :math:`n = 1..N_T`."""
    k, values = item
    positions, velocities = _integrate_sample(problem, k, values)
    h0 = hamiltonian(problem.initial_states[k], problem.params)
    value = h0 + _velocity_term(problem, velocities)

    params = problem.params
    dt = problem.grid.dt
    c = 1.0 / (1.0 + params.damping * dt)
    weight = -2.0 * params.damping * dt
    increments = problem.noise.path(k)
    n_steps = problem.grid.n_steps

    grad = np.zeros(n_steps)
    adj_x = np.zeros_like(positions[0])
    adj_v = weight * velocities[n_steps]
    for n in range(n_steps - 1, -1, -1):
        # Total sensitivity to V_{n+1}, including X_{n+1} = X_n + V_{n+1} dt
        adj_v_next = adj_v + dt * adj_x
        grad[n] = c * float(np.sum(adj_v_next * increments[n]))
        try:
            jvp = force_jacobian_product(
                SystemState(positions[n]), adj_v_next, params
            )
        except DomainError as e:
            raise RolloutError(str(e), step=n, sample=k) from e
        adj_x = adj_x + (c * dt) * jvp
        adj_v = c * adj_v_next
        if n >= 1:
            adj_v = adj_v + weight * velocities[n]
    return value, grad


def _ordered_mean(values) -> float:
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def _ordered_mean_array(arrays) -> np.ndarray:
    total = np.zeros_like(arrays[0])
    for a in arrays:
        total = total + a
    return total / len(arrays)


def saa_objective(u, problem: SaaProblem, pool=None) -> float:
    """Sample-average approximation of the expected terminal Hamiltonian.

    The :math:`H(0)` term is included even though it does not depend on the
    schedule.

    Parameters
    ----------
    u : :obj:`lanneal.schedule.TemperatureSchedule` or array_like
        Schedule on the grid of the problem.
    problem : :obj:`SaaProblem`
        The problem.
    pool : multiprocessing.Pool, optional
        Pool created with :py:func:`lanneal.utils.multiprocessing.create_pool`
        for this problem.

    Returns
    -------
    float
        Value of the objective.

    Raises
    ------
    RolloutError
        If any sample path fails. The error includes the sample index.
    """
    values = problem.check_controls(u)
    contributions = batch_evaluate(
        _sample_objective,
        [(k, values) for k in range(problem.n_samples)],
        problem=problem,
        pool=pool,
    )
    return _ordered_mean(contributions) + problem.heating_coefficient * float(
        np.sum(values[1:])
    )


def saa_value_and_amplitude_gradient(values, problem: SaaProblem, pool=None):
    """Objective and the gradient of the velocity term with respect to the
    noise amplitudes :math:`\\sqrt{2 B u(t_n)}`, :math:`n = 1..N_T`."""
    values = problem.check_controls(values)
    outputs = batch_evaluate(
        _sample_objective_and_gradient,
        [(k, values) for k in range(problem.n_samples)],
        problem=problem,
        pool=pool,
    )
    value = _ordered_mean([o[0] for o in outputs])
    value += problem.heating_coefficient * float(np.sum(values[1:]))
    if problem.grid.n_steps == 0:
        return value, np.zeros(0)
    grad = _ordered_mean_array([o[1] for o in outputs])
    return value, grad


def saa_gradient(u, problem: SaaProblem, pool=None) -> np.ndarray:
    """Gradient of :py:func:`saa_objective` with respect to
    :math:`u(t_1), \\dots, u(t_{N_T})`.

    Parameters
    ----------
    u : :obj:`lanneal.schedule.TemperatureSchedule` or array_like
        Schedule on the grid of the problem.
    problem : :obj:`SaaProblem`
        The problem.
    pool : multiprocessing.Pool, optional
        Pool created for this problem.

    Returns
    -------
    numpy.ndarray
        Array of length :math:`N_T`.

    Raises
    ------
    DomainError
        If any temperature is below the gradient floor. Use
        :py:func:`saa_gradient_sqrt` instead.
    """
    values = problem.check_controls(u)
    if np.any(values[1:] < config.general.gradient_floor):
        raise DomainError(
            "The gradient is not defined for temperatures below "
            f"{config.general.gradient_floor}, use `saa_gradient_sqrt` with "
            "s = sqrt(u) instead"
        )
    _, grad_amp = saa_value_and_amplitude_gradient(values, problem, pool=pool)
    damping = problem.params.damping
    return (
        grad_amp * np.sqrt(damping / (2.0 * values[1:]))
        + problem.heating_coefficient
    )


def saa_gradient_sqrt(s, problem: SaaProblem, pool=None) -> np.ndarray:
    """Gradient of the objective with respect to :math:`s_n = \\sqrt{u(t_n)}`
    for :math:`n = 1..N_T`.

    Defined for :math:`s = 0` since the noise amplitude is linear in
    :math:`s`.

    Parameters
    ----------
    s : array_like
        Square root of the schedule values, :math:`N_T + 1` entries.
    problem : :obj:`SaaProblem`
        The problem.
    pool : multiprocessing.Pool, optional
        Pool created for this problem.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("s must be non-negative")
    _, grad_amp = saa_value_and_amplitude_gradient(s**2, problem, pool=pool)
    return (
        grad_amp * np.sqrt(2.0 * problem.params.damping)
        + 2.0 * problem.heating_coefficient * s[1:]
    )


def _sample_curve(problem: SaaProblem, item) -> np.ndarray:
    """Hamiltonian at every grid time for sample k."""
    k, values = item
    positions, velocities = _integrate_sample(problem, k, values)
    curve = np.empty(len(positions))
    for n in range(len(positions)):
        try:
            curve[n] = hamiltonian(
                SystemState(positions[n], velocities[n]), problem.params
            )
        except DomainError as e:
            raise RolloutError(str(e), step=n, sample=k) from e
    return curve


def hamiltonian_curves(u, problem: SaaProblem, pool=None) -> np.ndarray:
    """Hamiltonian along every sample path.

    Returns
    -------
    numpy.ndarray
        Array with shape (M, N_T + 1).
    """
    values = problem.check_controls(u)
    curves = batch_evaluate(
        _sample_curve,
        [(k, values) for k in range(problem.n_samples)],
        problem=problem,
        pool=pool,
    )
    return np.array(curves)


def terminal_hamiltonian_estimate(
    u, problem: SaaProblem, pool=None
) -> Tuple[float, float]:
    """Direct estimate of :math:`E[H(T)]` on the sample paths of the
    problem.

    Returns
    -------
    tuple
        Sample mean and standard error of :math:`H(T)`.
    """
    curves = hamiltonian_curves(u, problem, pool=pool)
    return mean_and_stderr(curves[:, -1])


@dataclass
class HoldoutEstimate:
    """Estimate of :math:`E[H(T)]` on held-out sample paths.

    Parameters
    ----------
    mean : float
        Sample mean of :math:`H(T)`.
    stderr : float
        Standard error of the mean. Zero for a single sample.
    n_samples : int
        Number of held-out paths.
    seed : int
        Seed of the held-out paths.
    degenerate : bool
        True if the standard error could not be estimated.
    terminal_values : numpy.ndarray
        :math:`H(T)` of every path.
    mean_curve : numpy.ndarray
        Mean of :math:`H(t_n)` over the paths at every grid time.
    """

    mean: float
    stderr: float
    n_samples: int
    seed: int
    degenerate: bool = False
    terminal_values: np.ndarray = field(default=None, repr=False)
    mean_curve: np.ndarray = field(default=None, repr=False)

    def asdict(self) -> dict:
        return dict(
            mean=self.mean,
            stderr=self.stderr,
            n_samples=self.n_samples,
            seed=self.seed,
            degenerate=self.degenerate,
        )


def _estimate_from_curves(curves, seed) -> HoldoutEstimate:
    mean, stderr = mean_and_stderr(curves[:, -1])
    degenerate = len(curves) < 2
    if degenerate:
        logger.warning(
            "Only one held-out path, the standard error is reported as zero"
        )
    return HoldoutEstimate(
        mean=mean,
        stderr=stderr,
        n_samples=len(curves),
        seed=seed,
        degenerate=degenerate,
        terminal_values=curves[:, -1],
        mean_curve=_ordered_mean_array(list(curves)),
    )


def holdout_problem(
    params: SystemParams,
    grid: TimeGrid,
    m_holdout: int,
    seed: int,
    distribution: Optional[InitialDistribution] = None,
) -> SaaProblem:
    """Draw the held-out sample paths used to evaluate schedules."""
    return SaaProblem.draw(
        params,
        grid,
        m_holdout,
        seed,
        distribution=distribution,
        bounds=(0.0, np.inf),
        monotone=False,
    )


def evaluate_holdout(
    schedule: TemperatureSchedule,
    params: SystemParams,
    grid: TimeGrid,
    m_holdout: int,
    seed: int,
    distribution: Optional[InitialDistribution] = None,
    n_pool: Optional[int] = None,
) -> HoldoutEstimate:
    """Estimate :math:`E[H(T)]` for a schedule on fresh sample paths.

    The same seed must be used when comparing schedules so the estimates
    use common random numbers.

    Parameters
    ----------
    schedule : :obj:`lanneal.schedule.TemperatureSchedule`
        Schedule to evaluate.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    grid : :obj:`lanneal.grid.TimeGrid`
        Time grid.
    m_holdout : int
        Number of held-out paths.
    seed : int
        Seed of the held-out paths. Should differ from the training seed.
    distribution : :obj:`lanneal.sampling.InitialDistribution`, optional
        Distribution of the initial states.
    n_pool : int, optional
        Number of processes.

    Returns
    -------
    :obj:`HoldoutEstimate`
        The estimate.
    """
    schedule.check_grid(grid)
    problem = holdout_problem(params, grid, m_holdout, seed, distribution)
    pool = create_pool(n_pool, problem)
    try:
        curves = hamiltonian_curves(schedule, problem, pool=pool)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return _estimate_from_curves(curves, seed)


@dataclass
class ScheduleComparison:
    """Comparison of schedules on common held-out paths.

    The first schedule is the reference for the paired differences.
    """

    times: np.ndarray
    estimates: Dict[str, HoldoutEstimate]
    differences: Dict[str, Tuple[float, float]]

    @property
    def names(self) -> List[str]:
        return list(self.estimates.keys())

    def to_frame(self) -> pd.DataFrame:
        """Table with the mean and standard error of :math:`H(T)` and the
        paired difference to the reference schedule."""
        return pd.DataFrame(
            {
                "schedule": self.names,
                "mean_hamiltonian": [e.mean for e in self.estimates.values()],
                "stderr": [e.stderr for e in self.estimates.values()],
                "paired_difference": [
                    self.differences[n][0] for n in self.names
                ],
                "paired_stderr": [self.differences[n][1] for n in self.names],
            }
        )

    def curves_frame(self) -> pd.DataFrame:
        """Mean :math:`H(t)` of every schedule at every grid time."""
        df = pd.DataFrame({"time": self.times})
        for name, estimate in self.estimates.items():
            df[name] = estimate.mean_curve
        return df


def compare_schedules(
    schedules: Dict[str, TemperatureSchedule],
    params: SystemParams,
    grid: TimeGrid,
    m_holdout: int,
    seed: int,
    distribution: Optional[InitialDistribution] = None,
    n_pool: Optional[int] = None,
) -> ScheduleComparison:
    """Evaluate several schedules on the same held-out paths.

    Parameters
    ----------
    schedules : dict
        Schedules keyed by name. The first is the reference.
    params, grid, m_holdout, seed, distribution, n_pool
        See :py:func:`evaluate_holdout`.

    Raises
    ------
    ConfigurationError
        If any schedule is defined on a different grid.
    """
    if not schedules:
        raise ConfigurationError("No schedules to compare")
    for name, schedule in schedules.items():
        try:
            schedule.check_grid(grid)
        except ConfigurationError as e:
            raise ConfigurationError(f"Schedule `{name}`: {e}") from e
    problem = holdout_problem(params, grid, m_holdout, seed, distribution)
    pool = create_pool(n_pool, problem)
    try:
        estimates = {}
        for name, schedule in schedules.items():
            logger.info(f"Evaluating schedule `{name}` on held-out paths")
            curves = hamiltonian_curves(schedule, problem, pool=pool)
            estimates[name] = _estimate_from_curves(curves, seed)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    reference = next(iter(estimates.values()))
    differences = {}
    for name, estimate in estimates.items():
        if len(estimate.terminal_values) > 1:
            differences[name] = paired_difference(
                estimate.terminal_values, reference.terminal_values
            )
        else:
            differences[name] = (
                float(estimate.mean - reference.mean),
                0.0,
            )
    return ScheduleComparison(
        times=grid.times, estimates=estimates, differences=differences
    )
