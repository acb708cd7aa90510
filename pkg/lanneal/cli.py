# -*- coding: utf-8 -*-
"""
Command line interface.

Exit codes: 0 on success, 1 if a verification or comparison fails or the
solver fails and 2 for configuration errors.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np
import pandas as pd

from . import __version__
from .errors import (
    ConfigurationError,
    DomainError,
    MisuseError,
    OptimizationError,
    RolloutError,
)
from .experiment import ExperimentConfig, load_config
from .integrators import rollout
from .objective import SaaProblem, compare_schedules, evaluate_holdout
from .sampling import draw_noise, sample_initial_state
from .schedule import (
    constant_schedule,
    load_schedule,
    newton_cooling_schedule,
)
from .solvers import optimize_schedule
from .utils.io import save_dataframe, save_report
from .utils.logging import log_configuration, setup_logger
from .utils.multiprocessing import create_pool
from .verification import run_verification

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2

SCHEDULE_LABELS = {
    "optimize": "optimized",
    "newton": "newton",
    "constant": "constant",
    "file": "file",
}


def _output_file(config: ExperimentConfig, name: str) -> str:
    return os.path.join(config.out.dir, name)


def _save_hamiltonian_curve(config, times, hamiltonians, plots):
    save_dataframe(
        pd.DataFrame({"time": times, "hamiltonian": hamiltonians}),
        _output_file(config, "hamiltonian.csv"),
    )
    if plots:
        from .plot import plot_hamiltonian

        plot_hamiltonian(
            times,
            hamiltonians,
            filename=_output_file(config, "hamiltonian.svg"),
        )


def newton_schedule(config: ExperimentConfig):
    """Newton cooling schedule described by the configuration."""
    u_min, u_max = config.bounds
    u0 = config.newton.u0
    if u0 is None:
        u0 = u_max if np.isfinite(u_max) else max(1.0, u_min)
    u_env = config.newton.u_env if config.newton.u_env is not None else u_min
    return newton_cooling_schedule(
        u0,
        u_env,
        config.newton.rate,
        config.time_grid(),
        bounds=config.bounds,
    )


def optimized_schedule(config: ExperimentConfig, n_pool=None):
    """Optimise the schedule on the training paths.

    Returns
    -------
    :obj:`lanneal.solvers.OptimizationReport`
        The report without the held-out estimate.
    """
    problem = SaaProblem.draw(
        config.system_params(),
        config.time_grid(),
        config.solver.m,
        config.seed.train,
        distribution=config.initial_distribution(),
        bounds=config.bounds,
        monotone=config.control.monotone,
        literal_heating=config.control.literal_heating,
    )
    pool = create_pool(n_pool, problem)
    try:
        return optimize_schedule(
            problem,
            init=newton_schedule(config),
            options=config.solver_options(),
            solver=config.solver.name,
            pool=pool,
        )
    finally:
        if pool is not None:
            pool.close()
            pool.join()


def resolve_schedule(config: ExperimentConfig, source: str, n_pool=None):
    """Construct the schedule for a source.

    Parameters
    ----------
    config : :obj:`lanneal.experiment.ExperimentConfig`
        The configuration.
    source : {'optimize', 'newton', 'constant', 'file'}
        Source of the schedule.
    n_pool : int, optional
        Number of processes used by the optimiser.
    """
    grid = config.time_grid()
    if source == "optimize":
        return optimized_schedule(config, n_pool=n_pool).schedule
    if source == "newton":
        return newton_schedule(config)
    if source == "constant":
        return constant_schedule(
            config.schedule.constant,
            grid,
            bounds=config.bounds,
            monotone=config.control.monotone,
        )
    if source == "file":
        return load_schedule(
            config.schedule.file,
            bounds=config.bounds,
            monotone=config.control.monotone,
            grid=grid,
        )
    raise ConfigurationError(f"Unknown schedule source: {source}")


def cmd_simulate(config: ExperimentConfig, n_pool=None, plots=True) -> int:
    """Roll out one trajectory and save it.

    With noise, the schedule comes from :code:`schedule.source`, except that
    :code:`optimize` uses the Newton cooling schedule so the command does not
    run the optimiser.
    """
    params = config.system_params()
    grid = config.time_grid()
    initial = sample_initial_state(
        config.initial_distribution(), config.seed.train
    )
    if config.system.noise:
        source = config.schedule.source
        if source == "optimize":
            logger.info(
                "simulate does not optimise the schedule, using Newton cooling"
            )
            source = "newton"
        schedule = resolve_schedule(config, source)
        noise = draw_noise(
            config.seed.train, 1, grid.n_steps, params.n_particles, grid.dt
        ).path(0)
    else:
        schedule, noise = None, None
    traj = rollout(initial, schedule, noise, grid, params)
    traj.save(config.out.dir, "trajectory")
    _save_hamiltonian_curve(config, traj.times, traj.hamiltonians, plots)
    if plots:
        from .plot import plot_state

        plot_state(
            traj.initial_state,
            traj.final_state,
            filename=_output_file(config, "state.svg"),
        )
    logger.info(
        f"H(0) = {traj.hamiltonians[0]:.6f}, "
        f"H(T) = {traj.hamiltonians[-1]:.6f}"
    )
    return EXIT_SUCCESS


def _save_failed_report(config, report_file, error, report=None):
    if report is None:
        d = dict(converged=False, message=str(error))
    else:
        d = report.to_dict()
        d["error"] = str(error)
    d["dump_path"] = getattr(error, "dump_path", None)
    d["step"] = getattr(error, "step", None)
    d["sample"] = getattr(error, "sample", None)
    save_report(d, report_file, extension=config.out.format)


def cmd_optimize(config: ExperimentConfig, n_pool=None, plots=True) -> int:
    """Optimise the schedule, evaluate it on held-out paths and save the
    report, the schedule and the plot data.

    If the optimisation or the held-out evaluation fails, the report holds
    what is known at that point and the error message.
    """
    grid = config.time_grid()
    report_file = _output_file(config, "report")
    try:
        report = optimized_schedule(config, n_pool=n_pool)
    except (OptimizationError, RolloutError) as e:
        logger.error(f"Optimisation failed: {e}")
        _save_failed_report(config, report_file, e)
        return EXIT_FAILURE
    try:
        report.holdout = evaluate_holdout(
            report.schedule,
            config.system_params(),
            grid,
            config.holdout.m,
            config.seed.holdout,
            distribution=config.initial_distribution(),
            n_pool=n_pool,
        )
    except RolloutError as e:
        logger.error(f"Held-out evaluation failed: {e}")
        _save_failed_report(config, report_file, e, report=report)
        report.schedule.save(_output_file(config, "schedule.csv"), grid)
        return EXIT_FAILURE
    logger.info(
        f"Held-out H(T): {report.holdout.mean:.6f} "
        f"+/- {report.holdout.stderr:.6f}"
    )
    save_report(report.to_dict(), report_file, extension=config.out.format)
    report.schedule.save(_output_file(config, "schedule.csv"), grid)
    baseline = newton_schedule(config)
    curves = pd.DataFrame(
        {
            "time": grid.times,
            "optimized": report.schedule.values,
            "newton": baseline.values,
        }
    )
    save_dataframe(curves, _output_file(config, "schedule_plot.csv"))
    if plots:
        from .plot import plot_schedules

        plot_schedules(
            grid.times,
            {"Optimized": report.schedule.values, "Newton": baseline.values},
            filename=_output_file(config, "schedule.svg"),
            bounds=config.bounds,
        )
    return EXIT_SUCCESS


def cmd_compare(config: ExperimentConfig, n_pool=None, plots=True) -> int:
    """Compare :code:`schedule.source` with :code:`schedule.compare` on
    common held-out paths.

    Fails if the second schedule has a lower mean terminal Hamiltonian than
    the first.
    """
    schedules = {}
    for source in (config.schedule.source, config.schedule.compare):
        name = SCHEDULE_LABELS[source]
        if name in schedules:
            name = f"{name}_2"
        schedules[name] = resolve_schedule(config, source, n_pool=n_pool)
    comparison = compare_schedules(
        schedules,
        config.system_params(),
        config.time_grid(),
        config.holdout.m,
        config.seed.holdout,
        distribution=config.initial_distribution(),
        n_pool=n_pool,
    )
    table = comparison.to_frame()
    save_dataframe(table, _output_file(config, "comparison.csv"))
    curves = comparison.curves_frame()
    save_dataframe(curves, _output_file(config, "comparison_curves.csv"))
    for name, schedule in schedules.items():
        schedule.save(
            _output_file(config, f"schedule_{name}.csv"), config.time_grid()
        )
    if plots:
        from .plot import plot_comparison

        plot_comparison(
            curves,
            filename=_output_file(config, "comparison.svg"),
            stderr={n: e.stderr for n, e in comparison.estimates.items()},
        )
    print(table.to_string(index=False))
    first, second = comparison.names
    difference, stderr = comparison.differences[second]
    if difference < 0:
        logger.warning(
            f"`{second}` has a lower mean H(T) than `{first}` "
            f"(difference {difference:.6f} +/- {stderr:.6f})"
        )
        return EXIT_FAILURE
    return EXIT_SUCCESS


def cmd_verify(config: ExperimentConfig, n_pool=None, plots=True) -> int:
    """Run the convergence checks on a noise-free trajectory.

    Raises
    ------
    MisuseError
        If the configuration includes noise.
    """
    if config.system.noise:
        raise MisuseError(
            "verify requires a noise-free configuration, set system.noise "
            "to false"
        )
    params = config.system_params()
    grid = config.time_grid()
    initial = sample_initial_state(
        config.initial_distribution(), config.seed.train
    )
    traj = rollout(initial, None, None, grid, params)
    traj.save(config.out.dir, "trajectory")
    _save_hamiltonian_curve(config, traj.times, traj.hamiltonians, plots)
    report = run_verification(
        traj,
        params,
        v_tol=config.verify.v_tol,
        f_tol=config.verify.f_tol,
        distance_slack=config.verify.distance_slack,
        step_tol=config.verify.step_tol,
    )
    save_report(
        report.asdict(),
        _output_file(config, "verification"),
        extension=config.out.format,
    )
    table = report.as_table()
    save_dataframe(table, _output_file(config, "verification.csv"))
    print(table.to_string(index=False))
    if not report.h_monotone:
        logger.warning(
            f"Hamiltonian increased by {report.worst_violation:.3e} at step "
            f"{report.worst_step}"
        )
    return EXIT_SUCCESS if report.passed else EXIT_FAILURE


COMMANDS = {
    "simulate": cmd_simulate,
    "optimize": cmd_optimize,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


def get_parser() -> argparse.ArgumentParser:
    """Parser for the command line interface."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", type=str, default=None, help="JSON configuration file."
    )
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a configuration value. Can be repeated.",
    )
    common.add_argument(
        "--preset",
        choices=["controlled", "noise-free"],
        default=None,
        help=(
            "Preset providing the defaults. Defaults to `noise-free` for "
            "verify and `controlled` otherwise."
        ),
    )
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Number of worker processes. Does not change the results.",
    )
    common.add_argument(
        "--log-level",
        type=str,
        default="INFO",
        help="Logging level.",
    )
    common.add_argument(
        "--no-plots",
        action="store_true",
        help="Do not render figures. Data files are always written.",
    )
    common.add_argument(
        "--dump-config",
        type=str,
        default=None,
        metavar="PATH",
        help="Write the effective configuration to PATH and exit.",
    )

    parser = argparse.ArgumentParser(
        prog="lanneal",
        description=(
            "Langevin dynamics of Lennard-Jones particles and optimal "
            "annealing schedules."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser(
        "simulate", parents=[common], help="Roll out one trajectory."
    )
    subparsers.add_parser(
        "optimize", parents=[common], help="Optimise the schedule."
    )
    subparsers.add_parser(
        "compare", parents=[common], help="Compare two schedules."
    )
    subparsers.add_parser(
        "verify",
        parents=[common],
        help="Check the convergence of the noise-free dynamics.",
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the command line interface.

    Returns
    -------
    int
        The exit code.
    """
    args = get_parser().parse_args(argv)
    preset = args.preset
    if preset is None:
        preset = "noise-free" if args.command == "verify" else "controlled"
    try:
        config = load_config(args.config, args.overrides, preset=preset)
    except ConfigurationError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    if args.dump_config:
        config.save(args.dump_config)
        return EXIT_SUCCESS

    try:
        os.makedirs(config.out.dir, exist_ok=True)
        setup_logger(output=config.out.dir, log_level=args.log_level)
        config.save(_output_file(config, "config.json"))
    except (OSError, ValueError) as e:
        print(f"Could not set up the output: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    logger.info(f"Running `{args.command}` in {config.out.dir}")
    log_configuration(config.to_flat())
    try:
        return COMMANDS[args.command](
            config, n_pool=args.threads, plots=not args.no_plots
        )
    except (ConfigurationError, MisuseError) as e:
        logger.error(str(e))
        return EXIT_CONFIG_ERROR
    except (RolloutError, OptimizationError, DomainError) as e:
        logger.error(str(e))
        return EXIT_FAILURE
    except OSError as e:
        logger.error(f"Could not write the outputs: {e}")
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
