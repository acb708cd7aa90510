# -*- coding: utf-8 -*-
"""lanneal: Langevin annealing schedules for self-assembly

lanneal simulates the Langevin dynamics of Lennard-Jones particles, computes
temperature schedules that minimise the expected terminal energy using a
sample-average approximation and checks the convergence of the noise-free
dynamics to an equilibrium.
"""

import logging
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version(__name__)
except PackageNotFoundError:
    # package is not installed
    __version__ = "unknown"

logging.getLogger(__name__).addHandler(logging.NullHandler())
