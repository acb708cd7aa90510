"""Solvers for the schedule optimisation problem."""

from .base import BaseScheduleSolver, OptimizationReport, SolverOptions
from .projected import ProjectedGradientSolver
from .utils import (
    available_solvers,
    default_initial_schedule,
    get_solver_class,
    optimize_schedule,
)

__all__ = [
    "BaseScheduleSolver",
    "OptimizationReport",
    "ProjectedGradientSolver",
    "SolverOptions",
    "available_solvers",
    "default_initial_schedule",
    "get_solver_class",
    "optimize_schedule",
]
