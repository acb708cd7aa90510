# -*- coding: utf-8 -*-
"""
Utilities related to statistics.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import stats

logger = logging.getLogger(__name__)


def mean_and_stderr(x) -> Tuple[float, float]:
    """Compute the sample mean and the standard error of the mean.

    The standard error of a single sample is reported as zero.

    Parameters
    ----------
    x : array_like
        Samples.

    Returns
    -------
    tuple
        Sample mean and standard error.
    """
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("Cannot compute the mean of an empty array")
    mean = float(np.mean(x))
    if x.size == 1:
        return mean, 0.0
    return mean, float(stats.sem(x, ddof=1))


def paired_difference(a, b) -> Tuple[float, float]:
    """Mean and standard error of the paired difference :code:`a - b`.

    Parameters
    ----------
    a, b : array_like
        Samples evaluated with common random numbers.

    Returns
    -------
    tuple
        Mean difference and its standard error.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(
            f"Paired samples must have the same shape: {a.shape}, {b.shape}"
        )
    return mean_and_stderr(a - b)
