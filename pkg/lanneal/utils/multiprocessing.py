# -*- coding: utf-8 -*-
"""
Utilities related to multiprocessing.

Work over independent sample paths is mapped over a pool and the results are
always returned in ascending sample order, so any reduction performed by the
caller does not depend on the number of processes.
"""

import logging
import multiprocessing
from typing import Any, Callable, Iterable, List, Optional

_problem = None
logger = logging.getLogger(__name__)


def check_multiprocessing_start_method():
    """Check the multiprocessing start method.

    Print a warning if the start method is not `fork`.
    """
    start_method = multiprocessing.get_start_method()
    if start_method != "fork":
        logger.warning(
            f"Using {start_method} start method for multiprocessing. "
            "This may lead to high memory usage or errors. "
            "Consider using the `fork` start method. "
            "See the multiprocessing documentation for more details."
        )


def initialise_pool_variables(problem):
    """Prepare a problem for use with a multiprocessing pool.

    Makes a global copy of the problem. Should be passed to the
    :code:`initializer` argument with the problem as the only element of the
    :code:`initargs`.

    Parameters
    ----------
    problem : Any
        Object shared by every task, e.g.
        :py:obj:`lanneal.objective.SaaProblem`.
    """
    global _problem
    _problem = problem


def problem_task_wrapper(args):
    """Call a task with the problem stored in the worker process.

    Parameters
    ----------
    args : tuple
        Tuple of :code:`(func, item)`. The function is called as
        :code:`func(problem, item)`.
    """
    func, item = args
    return func(_problem, item)


def create_pool(n_pool: Optional[int], problem: Any = None):
    """Create a multiprocessing pool with the problem copied to each worker.

    Parameters
    ----------
    n_pool : int or None
        Number of processes. Returns None if this is None or less than two.
    problem : Any
        Object passed to :py:func:`initialise_pool_variables`.

    Returns
    -------
    multiprocessing.Pool or None
        The pool or None if the work should run serially.
    """
    if not n_pool or n_pool < 2:
        return None
    check_multiprocessing_start_method()
    logger.debug(f"Starting pool with {n_pool} processes")
    return multiprocessing.Pool(
        processes=n_pool,
        initializer=initialise_pool_variables,
        initargs=(problem,),
    )


def batch_evaluate(
    func: Callable,
    items: Iterable,
    problem: Any = None,
    pool=None,
) -> List[Any]:
    """Evaluate a function over a batch of independent items.

    Parameters
    ----------
    func : Callable
        Module level function called as :code:`func(problem, item)`.
    items : Iterable
        Items over which to evaluate the function, e.g. sample indices.
    problem : Any
        Problem passed to the function when running serially. When a pool is
        used, the copy made by :py:func:`initialise_pool_variables` is used.
    pool : multiprocessing.Pool, optional
        Pool used to evaluate the function.

    Returns
    -------
    list
        Outputs in the same order as the inputs.
    """
    items = list(items)
    if pool is None:
        return [func(problem, item) for item in items]
    return pool.map(problem_task_wrapper, [(func, item) for item in items])
