"""Tests for the custom exceptions"""

import pytest

from lanneal.errors import (
    ConfigurationError,
    DomainError,
    MisuseError,
    OptimizationError,
    RolloutError,
    StatisticalPowerError,
)


@pytest.mark.parametrize(
    "step, sample, expected",
    [
        (None, None, "failed"),
        (3, None, "failed (step 3)"),
        (3, 7, "failed (sample 7, step 3)"),
        (None, 7, "failed (sample 7)"),
    ],
)
def test_rollout_error_message(step, sample, expected):
    e = RolloutError("failed", step=step, sample=sample)
    assert str(e) == expected
    assert e.step == step
    assert e.sample == sample


def test_optimization_error_dump_path():
    e = OptimizationError("Objective is not finite", dump_path="it.json")
    assert e.dump_path == "it.json"
    assert str(e).endswith("Iterate saved to: it.json")


def test_optimization_error_no_dump():
    assert str(OptimizationError("failed")) == "failed"


@pytest.mark.parametrize(
    "cls", [ConfigurationError, DomainError, StatisticalPowerError]
)
def test_value_errors(cls):
    assert issubclass(cls, ValueError)


def test_misuse_error():
    assert issubclass(MisuseError, RuntimeError)
