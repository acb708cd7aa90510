# -*- coding: utf-8 -*-
"""Utilities for selecting and running the schedule solvers"""

import logging
from typing import Callable, Optional, Union

import numpy as np

from ..errors import ConfigurationError
from ..objective import SaaProblem
from ..schedule import (
    TemperatureSchedule,
    constant_schedule,
    newton_cooling_schedule,
)
from .base import BaseScheduleSolver, OptimizationReport, SolverOptions

logger = logging.getLogger(__name__)


def available_solvers():
    """Dictionary of the available solvers keyed by name."""
    from .projected import ProjectedGradientSolver

    return {
        "projected-gradient": ProjectedGradientSolver,
    }


def get_solver_class(
    solver: Union[str, None, Callable],
) -> Callable:
    """Get a solver class.

    Parameters
    ----------
    solver : Union[str, BaseScheduleSolver, None]
        The name of the solver or the class itself. If not specified,
        defaults to the projected gradient solver.

    Returns
    -------
    Callable
        The solver class.
    """
    if solver is None:
        solver = "projected-gradient"
    if isinstance(solver, str):
        solvers = available_solvers()
        try:
            return solvers[solver.lower()]
        except KeyError:
            raise ConfigurationError(
                f"Unknown solver: {solver}. "
                f"Choose from: {list(solvers.keys())}"
            )
    if isinstance(solver, type) and issubclass(solver, BaseScheduleSolver):
        return solver
    raise ConfigurationError(f"Invalid solver: {solver}")


def default_initial_schedule(problem: SaaProblem) -> TemperatureSchedule:
    """Newton cooling from the upper bound to the lower bound.

    If the upper bound is infinite, the cooling starts from
    :code:`max(1, u_min)`.
    """
    u_min, u_max = problem.bounds
    u0 = u_max if np.isfinite(u_max) else max(1.0, u_min)
    if u0 == u_min:
        return constant_schedule(
            u0, problem.grid, bounds=problem.bounds, monotone=problem.monotone
        )
    return newton_cooling_schedule(
        u0, u_min, None, problem.grid, bounds=problem.bounds
    )


def optimize_schedule(
    problem: SaaProblem,
    init: Optional[TemperatureSchedule] = None,
    options: Optional[SolverOptions] = None,
    solver: Union[str, None, Callable] = None,
    pool=None,
) -> OptimizationReport:
    """Minimise the sample-average objective over the feasible schedules.

    Parameters
    ----------
    problem : :obj:`lanneal.objective.SaaProblem`
        The problem.
    init : :obj:`lanneal.schedule.TemperatureSchedule`, optional
        Feasible initial schedule. Defaults to
        :py:func:`default_initial_schedule`.
    options : :obj:`lanneal.solvers.SolverOptions`, optional
        Solver options.
    solver : str or class, optional
        Solver to use. See :py:func:`available_solvers`.
    pool : multiprocessing.Pool, optional
        Pool created for the problem.

    Returns
    -------
    :obj:`lanneal.solvers.OptimizationReport`
        The report.
    """
    SolverClass = get_solver_class(solver)
    if init is None:
        init = default_initial_schedule(problem)
    return SolverClass(problem, options=options, pool=pool).optimize(init)
