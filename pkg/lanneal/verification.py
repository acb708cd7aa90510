# -*- coding: utf-8 -*-
"""
Runtime checks of the convergence properties of the dynamics.

The noise-free dynamics dissipate energy, :math:`\\dot{H} = -B \\sum_i
\\|V_i\\|^2 \\leq 0`, which bounds every pair distance from below and drives
the system to an equilibrium where every velocity and force vanishes. With
noise, the expected Hamiltonian satisfies an energy balance where the
temperature heats the system. The functions in this module check these
properties on recorded trajectories.
"""

import logging
from dataclasses import asdict, dataclass
from typing import List, NamedTuple, Optional

import numpy as np
import pandas as pd

from .errors import ConfigurationError, MisuseError, StatisticalPowerError
from .potential import pairwise_distance_floor, path_forces
from .system import DIMENSION, SystemParams
from .trajectory import TrajectoryRecord
from .utils.stats import mean_and_stderr

logger = logging.getLogger(__name__)

MIN_ENERGY_BALANCE_PATHS = 30
"""Smallest ensemble accepted by :py:func:`check_energy_balance_stochastic`.
"""

WINDOW_FLOOR = 1e-3
"""Fraction of the tolerances below which the speed and force are treated
as converged when checking they do not increase."""


class DissipationResult(NamedTuple):
    """Result of :py:func:`check_dissipation`."""

    passed: bool
    worst_violation: float
    """Largest increase of the Hamiltonian over one step, zero if it never
    increases."""
    worst_step: int
    """Step with the largest change of the Hamiltonian."""
    identity_residual: float
    """Largest residual of :math:`\\Delta H / \\Delta t = -B \\sum_i
    \\|V_i(t_{n+1})\\|^2`."""


class DistanceFloorResult(NamedTuple):
    """Result of :py:func:`check_distance_floor`."""

    passed: bool
    min_observed: float
    floor: float


class EnergyBalanceResult(NamedTuple):
    """Result of :py:func:`check_energy_balance_stochastic`."""

    gap: float
    stderr: float
    passed: bool
    n_paths: int


def _require_noise_free(traj: TrajectoryRecord, name: str) -> None:
    if traj.noisy:
        raise MisuseError(
            f"{name} requires a noise-free trajectory but the trajectory "
            "was generated with thermal noise"
        )


def check_dissipation(
    traj: TrajectoryRecord, params: SystemParams, step_tol: float = 10.0
) -> DissipationResult:
    """Check the Hamiltonian does not increase along a noise-free trajectory.

    Step :math:`n` passes if

    .. math::

        H(t_{n+1}) - H(t_n) \\leq c \\Delta t^2 (1 + |H(t_n)|)

    where :math:`c` is :code:`step_tol`. The tolerance absorbs the
    discretisation error of the integrator.

    Parameters
    ----------
    traj : :obj:`lanneal.trajectory.TrajectoryRecord`
        Noise-free trajectory.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    step_tol : float
        Factor :math:`c` of the step tolerance.

    Returns
    -------
    :obj:`DissipationResult`
        Whether every step passed, the worst violation and the residual of
        the dissipation identity.

    Raises
    ------
    MisuseError
        If the trajectory is noisy.
    """
    _require_noise_free(traj, "check_dissipation")
    if traj.n_steps == 0:
        return DissipationResult(True, 0.0, 0, 0.0)
    h = traj.hamiltonians
    dt = traj.dt
    dh = np.diff(h)
    tol = step_tol * dt**2 * (1.0 + np.abs(h[:-1]))
    passed = bool(np.all(dh <= tol))
    worst_step = int(np.argmax(dh))
    worst_violation = max(0.0, float(dh[worst_step]))
    rate = params.damping * np.sum(traj.velocities[1:] ** 2, axis=(1, 2))
    residual = float(np.max(np.abs(dh / dt + rate)))
    if not passed:
        first = int(np.argmax(dh > tol))
        logger.warning(
            f"Hamiltonian increased by {dh[first]:.3e} at step {first} "
            f"(tolerance {tol[first]:.3e})"
        )
    return DissipationResult(passed, worst_violation, worst_step, residual)


def _window_indices(n_times: int, fraction: float) -> np.ndarray:
    n_window = max(1, int(np.ceil(fraction * (n_times - 1)))) + 1
    return np.arange(max(0, n_times - n_window), n_times)


def _non_increasing_chunks(values, floor: float = 0.0, max_chunks: int = 5):
    """Check the maxima of consecutive chunks do not increase.

    Maxima below :code:`floor` are treated as equal to it.
    """
    chunks = np.array_split(values, min(max_chunks, len(values)))
    maxima = np.array([c.max() for c in chunks if len(c)])
    return bool(np.all(np.diff(np.maximum(maxima, floor)) <= 0))


@dataclass
class ConvergenceReport:
    """Result of the convergence checks on a noise-free trajectory.

    Parameters
    ----------
    h_monotone : bool
        Whether the Hamiltonian never increased beyond the step tolerance.
    worst_violation : float
        Largest increase of the Hamiltonian over one step.
    worst_step : int
        Step of the largest change of the Hamiltonian.
    identity_residual : float
        Residual of the dissipation identity.
    terminal_speed : float
        :math:`\\max_i \\|V_i(T)\\|`.
    terminal_force : float
        :math:`\\max_i \\|f_i(T)\\|`.
    speed_decreasing, force_decreasing : bool
        Whether the speed and force did not increase over the final window.
    distance_floor_ok : bool
        Whether the pair distances stayed above the floor.
    min_distance : float
        Smallest observed pair distance.
    distance_floor : float
        Floor implied by the initial Hamiltonian.
    equilibrium_reached : bool
        Speed and force below the tolerances and not increasing over the
        final window.
    v_tol, f_tol : float
        Tolerances on the speed and the force.
    """

    h_monotone: bool
    worst_violation: float
    worst_step: int
    identity_residual: float
    terminal_speed: float
    terminal_force: float
    speed_decreasing: bool
    force_decreasing: bool
    distance_floor_ok: bool
    min_distance: float
    distance_floor: float
    equilibrium_reached: bool
    v_tol: float
    f_tol: float

    @property
    def passed(self) -> bool:
        """True if every check passed."""
        return (
            self.h_monotone
            and self.distance_floor_ok
            and self.equilibrium_reached
        )

    def asdict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def as_table(self) -> pd.DataFrame:
        """Pass/fail table with one row per check."""
        rows = [
            ("dissipation", self.worst_violation, np.nan, self.h_monotone),
            (
                "terminal_speed",
                self.terminal_speed,
                self.v_tol,
                self.terminal_speed < self.v_tol,
            ),
            (
                "terminal_force",
                self.terminal_force,
                self.f_tol,
                self.terminal_force < self.f_tol,
            ),
            ("speed_window", np.nan, np.nan, self.speed_decreasing),
            ("force_window", np.nan, np.nan, self.force_decreasing),
            (
                "distance_floor",
                self.min_distance,
                self.distance_floor,
                self.distance_floor_ok,
            ),
            ("equilibrium", np.nan, np.nan, self.equilibrium_reached),
        ]
        return pd.DataFrame(
            rows, columns=["check", "value", "threshold", "passed"]
        )


def max_force_norms(traj: TrajectoryRecord, params: SystemParams, steps):
    """Largest force norm over the particles at the given steps."""
    forces = path_forces(traj.positions[steps], params)
    return np.max(np.linalg.norm(forces, axis=2), axis=1)


def check_distance_floor(
    traj: TrajectoryRecord,
    params: SystemParams,
    slack: float = 0.9,
    tight: bool = False,
) -> DistanceFloorResult:
    """Check the pair distances stay above the floor implied by the initial
    Hamiltonian.

    Parameters
    ----------
    traj : :obj:`lanneal.trajectory.TrajectoryRecord`
        Noise-free trajectory.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    slack : float
        The check passes if the smallest distance is at least
        :code:`slack` times the floor.
    tight : bool
        Use the tighter floor, see
        :py:func:`lanneal.potential.pairwise_distance_floor`.

    Returns
    -------
    :obj:`DistanceFloorResult`
        Whether the check passed, the smallest observed distance (infinite for
        a single particle) and the floor.
    """
    if not 0 < slack <= 1:
        raise ConfigurationError("slack must be in (0, 1]")
    floor = pairwise_distance_floor(
        float(traj.hamiltonians[0]), params, tight=tight
    )
    min_observed = float(np.min(traj.min_pair_distance))
    passed = bool(min_observed >= slack * floor)
    if not passed:
        step = int(np.argmin(traj.min_pair_distance))
        logger.warning(
            f"Pair distance {min_observed:.4f} at step {step} is below "
            f"{slack} x floor {floor:.4f}"
        )
    return DistanceFloorResult(passed, min_observed, floor)


def check_equilibrium(
    traj: TrajectoryRecord,
    params: SystemParams,
    v_tol: float = 1e-4,
    f_tol: float = 1e-3,
    window: float = 0.1,
    step_tol: float = 10.0,
    distance_slack: float = 0.9,
) -> ConvergenceReport:
    """Check a noise-free trajectory has converged to an equilibrium.

    The equilibrium is reached if the largest speed and force at the final
    time are below the tolerances and neither increased over the final
    fraction of the steps. The window is split into at most five chunks
    whose maxima must not increase, so damped oscillations still count as
    decreasing.

    Also runs :py:func:`check_dissipation` and
    :py:func:`check_distance_floor`.

    Parameters
    ----------
    traj : :obj:`lanneal.trajectory.TrajectoryRecord`
        Noise-free trajectory.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    v_tol : float
        Tolerance on the largest speed.
    f_tol : float
        Tolerance on the largest force.
    window : float
        Fraction of the steps in the final window.
    step_tol : float
        Factor of the step tolerance of :py:func:`check_dissipation`.
    distance_slack : float
        Slack of :py:func:`check_distance_floor`.

    Returns
    -------
    :obj:`ConvergenceReport`
        The report.
    """
    if not 0 < window <= 1:
        raise ConfigurationError("window must be in (0, 1]")
    if traj.noisy:
        logger.warning(
            "Trajectory is noisy, the dissipation check is not applicable"
        )
        dissipation = DissipationResult(False, np.nan, 0, np.nan)
    else:
        dissipation = check_dissipation(traj, params, step_tol=step_tol)
    distance = check_distance_floor(traj, params, slack=distance_slack)

    steps = _window_indices(len(traj), window)
    speeds = np.max(np.linalg.norm(traj.velocities[steps], axis=2), axis=1)
    forces = max_force_norms(traj, params, steps)
    terminal_speed = float(speeds[-1])
    terminal_force = float(forces[-1])
    speed_decreasing = _non_increasing_chunks(
        speeds, floor=WINDOW_FLOOR * v_tol
    )
    force_decreasing = _non_increasing_chunks(
        forces, floor=WINDOW_FLOOR * f_tol
    )
    equilibrium = (
        terminal_speed < v_tol
        and terminal_force < f_tol
        and speed_decreasing
        and force_decreasing
    )
    logger.debug(
        f"Terminal speed: {terminal_speed:.3e}, "
        f"terminal force: {terminal_force:.3e}"
    )
    return ConvergenceReport(
        h_monotone=dissipation.passed,
        worst_violation=dissipation.worst_violation,
        worst_step=dissipation.worst_step,
        identity_residual=dissipation.identity_residual,
        terminal_speed=terminal_speed,
        terminal_force=terminal_force,
        speed_decreasing=speed_decreasing,
        force_decreasing=force_decreasing,
        distance_floor_ok=distance.passed,
        min_distance=distance.min_observed,
        distance_floor=distance.floor,
        equilibrium_reached=bool(equilibrium),
        v_tol=v_tol,
        f_tol=f_tol,
    )


def run_verification(
    traj: TrajectoryRecord,
    params: SystemParams,
    v_tol: float = 1e-4,
    f_tol: float = 1e-3,
    distance_slack: float = 0.9,
    step_tol: float = 10.0,
) -> ConvergenceReport:
    """Run every deterministic check on a noise-free trajectory.

    Raises
    ------
    MisuseError
        If the trajectory is noisy.
    """
    _require_noise_free(traj, "run_verification")
    report = check_equilibrium(
        traj,
        params,
        v_tol=v_tol,
        f_tol=f_tol,
        step_tol=step_tol,
        distance_slack=distance_slack,
    )
    status = "passed" if report.passed else "failed"
    logger.info(f"Verification {status}")
    return report


def _heating_coefficient(params, dt, literal_heating):
    components = 1 if literal_heating else DIMENSION
    return components * params.n_particles * params.damping * dt


def energy_balance_terms(
    trajs: List[TrajectoryRecord],
    schedule,
    params: SystemParams,
    literal_heating: bool = False,
) -> pd.DataFrame:
    """Direct and integral-form estimates of :math:`H(T)` for every path.

    The integral form adds to :math:`H(0)` the change of the potential energy
    and the expected change of the kinetic energy of every step given the
    previous state. With :math:`c = 1 / (1 + B \\Delta t)` this is

    .. math::

        H(0) + \\Phi(T) - \\Phi(0)
            + \\sum_{n=0}^{N_T - 1} \\left[\\frac{c^2}{2}
            \\|V(t_n) + f(X(t_n)) \\Delta t\\|^2
            - \\frac{1}{2} \\|V(t_n)\\|^2\\right]
            + 3 N c^2 B \\Delta t \\sum_{n=1}^{N_T} u(t_n).

    The difference between the direct and the integral form is a sum of
    martingale increments of the integrator, so it has zero mean for any
    step size. For a non-interacting system the first sum reduces to the
    dissipation :math:`\\frac{c^2 - 1}{2} \\sum_n \\|V(t_n)\\|^2`.

    With :code:`literal_heating=True` the factor 3 is dropped.

    Returns
    -------
    pandas.DataFrame
        Columns :code:`path,direct,integral,difference`.
    """
    values = np.asarray(getattr(schedule, "values", schedule), dtype=float)
    direct = []
    integral = []
    for k, traj in enumerate(trajs):
        if len(values) != len(traj):
            raise ConfigurationError(
                f"Schedule has {len(values)} values but path {k} has "
                f"{len(traj)} points"
            )
        h = traj.hamiltonians
        direct.append(float(h[-1]))
        if traj.n_steps == 0:
            integral.append(float(h[0]))
            continue
        dt = traj.dt
        c = 1.0 / (1.0 + params.damping * dt)
        v = traj.velocities
        kinetic = 0.5 * np.sum(v**2, axis=(1, 2))
        potential_change = (h[-1] - kinetic[-1]) - (h[0] - kinetic[0])
        forces = path_forces(traj.positions[:-1], params)
        kicked = 0.5 * c**2 * np.sum((v[:-1] + forces * dt) ** 2)
        heating = _heating_coefficient(params, dt, literal_heating)
        integral.append(
            float(h[0])
            + float(potential_change)
            + float(kicked - np.sum(kinetic[:-1]))
            + c**2 * heating * float(np.sum(values[1:]))
        )
    direct = np.array(direct)
    integral = np.array(integral)
    return pd.DataFrame(
        {
            "path": np.arange(len(direct)),
            "direct": direct,
            "integral": integral,
            "difference": direct - integral,
        }
    )


def check_energy_balance_stochastic(
    trajs: List[TrajectoryRecord],
    schedule,
    params: SystemParams,
    literal_heating: bool = False,
    n_sigma: float = 3.0,
    min_paths: Optional[int] = None,
) -> EnergyBalanceResult:
    """Check the energy balance of the noisy dynamics on an ensemble.

    Compares the sample mean of :math:`H(T)` with the discretised right-hand
    side of the energy balance (see :py:func:`energy_balance_terms`). The
    paths share the schedule and have independent noise, so the difference is
    estimated path by path.

    Parameters
    ----------
    trajs : list
        Trajectories generated with independent noise.
    schedule : :obj:`lanneal.schedule.TemperatureSchedule` or array_like
        Schedule used to generate the trajectories.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    literal_heating : bool
        Count one noise component per particle in the heating term.
    n_sigma : float
        The check passes if the absolute gap is at most this many standard
        errors.
    min_paths : int, optional
        Smallest accepted ensemble. Defaults to
        :py:data:`MIN_ENERGY_BALANCE_PATHS`.

    Returns
    -------
    :obj:`EnergyBalanceResult`
        Mean gap, its standard error and whether the check passed.

    Raises
    ------
    StatisticalPowerError
        If there are too few trajectories.
    """
    if min_paths is None:
        min_paths = MIN_ENERGY_BALANCE_PATHS
    if len(trajs) < min_paths:
        raise StatisticalPowerError(
            f"At least {min_paths} trajectories are required, got "
            f"{len(trajs)}"
        )
    terms = energy_balance_terms(
        trajs, schedule, params, literal_heating=literal_heating
    )
    gap, stderr = mean_and_stderr(terms["difference"])
    passed = bool(abs(gap) <= n_sigma * stderr)
    logger.info(
        f"Energy balance gap: {gap:.4e} +/- {stderr:.4e} "
        f"({'passed' if passed else 'failed'})"
    )
    return EnergyBalanceResult(gap, stderr, passed, len(trajs))
