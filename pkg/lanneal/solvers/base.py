# -*- coding: utf-8 -*-
"""Base schedule solver object"""

import datetime
import logging
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..errors import ConfigurationError, OptimizationError
from ..objective import HoldoutEstimate, SaaProblem
from ..schedule import TemperatureSchedule
from ..utils.io import save_to_json

logger = logging.getLogger(__name__)


@dataclass
class SolverOptions:
    """Options shared by the schedule solvers."""

    max_iter: int = 500
    """Maximum number of iterations."""
    tol: float = 1e-6
    """Tolerance on the norm of the projected gradient."""
    initial_step: float = 1.0
    """Length of the first trial step in the largest gradient component."""
    armijo: float = 1e-4
    """Sufficient decrease parameter of the line search."""
    backtrack: float = 0.5
    """Factor by which the step is reduced after a rejected trial."""
    max_backtracks: int = 50
    """Maximum number of reductions of the step per iteration."""
    logging_interval: int = 10
    """Number of iterations between INFO log messages."""
    dump_dir: Optional[str] = None
    """Directory for the iterate dumped when the objective is not finite.
    Defaults to the current working directory."""

    def __post_init__(self):
        if self.max_iter < 0:
            raise ConfigurationError("max_iter must be non-negative")
        if not self.tol >= 0:
            raise ConfigurationError("tol must be non-negative")
        if not self.initial_step > 0:
            raise ConfigurationError("initial_step must be positive")
        if not 0 < self.armijo < 1:
            raise ConfigurationError("armijo must be in (0, 1)")
        if not 0 < self.backtrack < 1:
            raise ConfigurationError("backtrack must be in (0, 1)")
        if self.max_backtracks < 1:
            raise ConfigurationError("max_backtracks must be at least 1")
        if self.logging_interval < 1:
            raise ConfigurationError("logging_interval must be at least 1")


@dataclass
class OptimizationReport:
    """Result of a schedule optimisation.

    Parameters
    ----------
    schedule : :obj:`lanneal.schedule.TemperatureSchedule`
        Final schedule. Always feasible.
    objective_history : list
        Objective at the initial point and after every accepted step.
        Non-increasing.
    iterations : int
        Number of accepted steps.
    converged : bool
        True if the projected gradient norm fell below the tolerance.
    message : str
        Reason for stopping.
    solver : str
        Name of the solver.
    projected_gradient_norm : float
        Norm of the projected gradient at the final schedule.
    solve_time : float
        Wall-clock time of the optimisation in seconds. Includes the
        rollouts and the adjoint passes.
    holdout : :obj:`lanneal.objective.HoldoutEstimate`, optional
        Estimate of the terminal Hamiltonian on held-out paths.
    """

    schedule: TemperatureSchedule
    objective_history: List[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    message: str = ""
    solver: str = ""
    projected_gradient_norm: float = np.nan
    solve_time: float = 0.0
    holdout: Optional[HoldoutEstimate] = None

    @property
    def final_objective(self) -> float:
        return self.objective_history[-1]

    def to_dict(self) -> dict:
        """Convert the report to a dictionary for saving.

        The keys are:

        - :code:`schedule`: bounds, monotone flag and values
        - :code:`objective_history`: objective after every accepted step
        - :code:`iterations`: number of accepted steps
        - :code:`converged`: whether the tolerance was reached
        - :code:`holdout`: mean, standard error, number of paths and seed of
          the held-out estimate, or None
        - :code:`message`, :code:`solver`, :code:`projected_gradient_norm`

        The solve time is not included so that reruns produce identical
        files.
        """
        return dict(
            schedule=self.schedule.asdict(),
            objective_history=np.array(self.objective_history),
            iterations=self.iterations,
            converged=self.converged,
            holdout=self.holdout.asdict() if self.holdout else None,
            message=self.message,
            solver=self.solver,
            projected_gradient_norm=self.projected_gradient_norm,
        )


class BaseScheduleSolver(ABC):
    """Base class for solvers of the sample-average schedule problem.

    Parameters
    ----------
    problem : :obj:`lanneal.objective.SaaProblem`
        The problem to solve.
    options : :obj:`SolverOptions`, optional
        Solver options.
    pool : multiprocessing.Pool, optional
        Pool created for the problem with
        :py:func:`lanneal.utils.multiprocessing.create_pool`.
    """

    name: str = None

    def __init__(
        self,
        problem: SaaProblem,
        options: Optional[SolverOptions] = None,
        pool=None,
    ):
        self.problem = problem
        self.options = options if options is not None else SolverOptions()
        self.pool = pool
        self.iteration = 0
        self.objective_evaluations = 0
        self.gradient_evaluations = 0

    @abstractmethod
    def optimize(self, init: TemperatureSchedule) -> OptimizationReport:
        """Optimise the schedule starting from a feasible schedule."""
        raise NotImplementedError()

    def check_init(self, init: TemperatureSchedule) -> None:
        """Check the initial schedule matches the problem."""
        init.check_grid(self.problem.grid)
        u_min, u_max = self.problem.bounds
        if np.any(init.values < u_min) or np.any(init.values > u_max):
            raise ConfigurationError(
                "Initial schedule is outside of the bounds of the problem"
            )
        if self.problem.monotone and np.any(np.diff(init.values) > 0):
            raise ConfigurationError(
                "Initial schedule must be non-increasing"
            )

    def dump_iterate(self, values, objective) -> str:
        """Save an iterate to a JSON file and return its path."""
        output = self.options.dump_dir or os.getcwd()
        os.makedirs(output, exist_ok=True)
        timestamp = datetime.datetime.now().strftime("%Y%m%d-%H%M%S")
        path = os.path.join(output, f"failed_iterate_{timestamp}.json")
        save_to_json(
            dict(
                values=np.asarray(values),
                objective=str(objective),
                iteration=self.iteration,
                solver=self.name,
                seed=self.problem.seed,
            ),
            path,
        )
        return path

    def check_finite(self, values, objective) -> None:
        """Raise an error with a dump of the iterate if the objective is
        not finite."""
        if not np.isfinite(objective):
            path = self.dump_iterate(values, objective)
            raise OptimizationError(
                f"Objective is not finite ({objective}) at iteration "
                f"{self.iteration}",
                dump_path=path,
            )

    def log_state(self, objective, pg_norm, force=False) -> None:
        if force or self.iteration % self.options.logging_interval == 0:
            logger.info(
                f"it: {self.iteration:5d}: J: {objective:.5f} "
                f"|pg|: {pg_norm:.3e} "
                f"evals: {self.objective_evaluations}"
            )
