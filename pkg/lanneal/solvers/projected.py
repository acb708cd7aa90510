# -*- coding: utf-8 -*-
"""
Projected gradient descent with an Armijo backtracking line search.
"""

import datetime
import logging

import numpy as np

from .. import config
from ..errors import RolloutError
from ..objective import saa_objective, saa_value_and_amplitude_gradient
from ..schedule import TemperatureSchedule, project_feasible
from .base import BaseScheduleSolver, OptimizationReport

logger = logging.getLogger(__name__)


class ProjectedGradientSolver(BaseScheduleSolver):
    """Projected gradient descent over the feasible schedules.

    The feasible set is a box, optionally intersected with the
    non-increasing sequences, so the projection is exact (see
    :py:func:`lanneal.schedule.project_feasible`).

    If the lower bound is below the gradient floor the solver works with
    :math:`s = \\sqrt{u}`, for which the gradient is defined at zero. The
    map is monotone so the constraints keep the same form with the bounds
    replaced by their square roots.

    :math:`u(t_0)` does not enter the dynamics, its gradient is zero and it
    only changes through the projection.
    """

    name = "projected-gradient"

    def __init__(self, problem, options=None, pool=None):
        super().__init__(problem, options=options, pool=pool)
        u_min, u_max = problem.bounds
        self.use_sqrt = u_min < config.general.gradient_floor
        if self.use_sqrt:
            self.x_bounds = (np.sqrt(u_min), np.sqrt(u_max))
        else:
            self.x_bounds = (u_min, u_max)
        logger.debug(
            f"Optimising in {'sqrt(u)' if self.use_sqrt else 'u'} with "
            f"bounds {self.x_bounds}"
        )

    def to_values(self, x) -> np.ndarray:
        """Map the optimisation variable to the schedule values."""
        if self.use_sqrt:
            return x**2
        return np.array(x, dtype=float)

    def from_values(self, values) -> np.ndarray:
        if self.use_sqrt:
            return np.sqrt(values)
        return np.array(values, dtype=float)

    def project(self, x) -> np.ndarray:
        return project_feasible(
            x, self.x_bounds, monotone=self.problem.monotone
        ).values.copy()

    def objective(self, x) -> float:
        self.objective_evaluations += 1
        return saa_objective(self.to_values(x), self.problem, pool=self.pool)

    def value_and_gradient(self, x):
        """Objective and its gradient with respect to every entry of the
        variable, including the zero gradient of the first entry."""
        self.objective_evaluations += 1
        self.gradient_evaluations += 1
        values = self.to_values(x)
        value, grad_amp = saa_value_and_amplitude_gradient(
            values, self.problem, pool=self.pool
        )
        heating = self.problem.heating_coefficient
        damping = self.problem.params.damping
        grad = np.zeros_like(x)
        if self.use_sqrt:
            grad[1:] = (
                grad_amp * np.sqrt(2.0 * damping) + 2.0 * heating * x[1:]
            )
        else:
            scale = np.sqrt(damping / (2.0 * values[1:]))
            grad[1:] = grad_amp * scale + heating
        return value, grad

    def projected_gradient_norm(self, x, grad) -> float:
        return float(np.linalg.norm(x - self.project(x - grad)))

    def line_search(self, x, value, grad, step):
        """Backtracking search along the projection arc.

        Returns
        -------
        tuple
            Accepted point, its objective and the step, or None if no step
            satisfied the sufficient decrease condition.
        """
        opts = self.options
        for _ in range(opts.max_backtracks):
            x_new = self.project(x - step * grad)
            direction = x_new - x
            if not np.any(direction):
                step *= opts.backtrack
                continue
            try:
                value_new = self.objective(x_new)
            except RolloutError as e:
                logger.debug(f"Rejecting trial step {step:.3e}: {e}")
                step *= opts.backtrack
                continue
            self.check_finite(self.to_values(x_new), value_new)
            decrease = opts.armijo * float(np.dot(grad, direction))
            if value_new <= value + decrease:
                return x_new, value_new, step
            step *= opts.backtrack
        return None

    def optimize(self, init: TemperatureSchedule) -> OptimizationReport:
        """Optimise the schedule.

        Parameters
        ----------
        init : :obj:`lanneal.schedule.TemperatureSchedule`
            Feasible initial schedule.

        Returns
        -------
        :obj:`lanneal.solvers.OptimizationReport`
            Report with the final schedule and the objective history.

        Raises
        ------
        OptimizationError
            If the objective is not finite. The iterate is saved to a file.
        """
        self.check_init(init)
        opts = self.options
        start = datetime.datetime.now()
        logger.info(
            f"Starting {self.name} with {self.problem.n_samples} sample paths"
        )

        x = self.project(self.from_values(init.values))
        value, grad = self.value_and_gradient(x)
        self.check_finite(self.to_values(x), value)
        history = [value]
        pg_norm = self.projected_gradient_norm(x, grad)
        step = opts.initial_step / max(np.max(np.abs(grad)), 1e-300)
        converged = False

        while True:
            if pg_norm <= opts.tol:
                converged = True
                message = "Projected gradient norm below tolerance"
                break
            if self.iteration >= opts.max_iter:
                message = "Reached maximum number of iterations"
                break
            result = self.line_search(x, value, grad, step)
            if result is None:
                message = "Line search did not find a sufficient decrease"
                logger.warning(message)
                break
            x, value, step = result
            self.iteration += 1
            history.append(value)
            _, grad = self.value_and_gradient(x)
            pg_norm = self.projected_gradient_norm(x, grad)
            step /= opts.backtrack
            self.log_state(value, pg_norm)

        self.log_state(value, pg_norm, force=True)
        solve_time = (datetime.datetime.now() - start).total_seconds()
        logger.info(f"Finished in {solve_time:.1f} s: {message}")
        u_min, u_max = self.problem.bounds
        schedule = TemperatureSchedule(
            np.clip(self.to_values(x), u_min, u_max),
            u_min=u_min,
            u_max=u_max,
            monotone_nonincreasing=self.problem.monotone,
        )
        return OptimizationReport(
            schedule=schedule,
            objective_history=history,
            iterations=self.iteration,
            converged=converged,
            message=message,
            solver=self.name,
            projected_gradient_norm=pg_norm,
            solve_time=solve_time,
        )
