# -*- coding: utf-8 -*-
"""
Tests for the multiprocessing utilities
"""

import operator
from multiprocessing.dummy import Pool
from unittest.mock import MagicMock, patch

import pytest

from lanneal.utils.multiprocessing import (
    batch_evaluate,
    check_multiprocessing_start_method,
    create_pool,
    initialise_pool_variables,
    problem_task_wrapper,
)


def _scaled(problem, item):
    return problem.scale * item


def test_problem_task_wrapper():
    problem = MagicMock()
    problem.scale = 10
    initialise_pool_variables(problem)
    pool = Pool(1)
    out = pool.map(problem_task_wrapper, [(_scaled, i) for i in range(3)])
    pool.close()
    pool.terminate()
    assert out == [0, 10, 20]
    initialise_pool_variables(None)


@pytest.mark.parametrize("method", ["fork", "forkserver", "spawn"])
def test_check_multiprocessing_start_method(method, caplog):
    with patch("multiprocessing.get_start_method", return_value=method):
        check_multiprocessing_start_method()
    if method != "fork":
        assert "This may lead to high memory usage or errors" in caplog.text


@pytest.mark.parametrize("n_pool", [None, 0, 1])
def test_create_pool_serial(n_pool):
    assert create_pool(n_pool) is None


def test_create_pool():
    problem = MagicMock()
    with (
        patch("multiprocessing.Pool") as mock_pool,
        patch(
            "lanneal.utils.multiprocessing.check_multiprocessing_start_method"
        ) as mock_check,
    ):
        out = create_pool(4, problem)
    mock_check.assert_called_once()
    mock_pool.assert_called_once_with(
        processes=4,
        initializer=initialise_pool_variables,
        initargs=(problem,),
    )
    assert out is mock_pool.return_value


def test_batch_evaluate_serial():
    problem = MagicMock()
    problem.scale = 2
    assert batch_evaluate(_scaled, range(4), problem=problem) == [0, 2, 4, 6]


def test_batch_evaluate_pool():
    pool = MagicMock()
    pool.map.return_value = [1, 2]
    out = batch_evaluate(_scaled, [3, 4], pool=pool)
    pool.map.assert_called_once_with(
        problem_task_wrapper, [(_scaled, 3), (_scaled, 4)]
    )
    assert out == [1, 2]


@pytest.mark.integration_test
@pytest.mark.timeout(30)
def test_batch_evaluate_order_integration():
    """Assert the outputs of a process pool are in the order of the inputs."""
    pool = create_pool(2, 3)
    try:
        out = batch_evaluate(operator.mul, range(20), pool=pool)
    finally:
        pool.close()
        pool.join()
    assert out == [3 * i for i in range(20)]
