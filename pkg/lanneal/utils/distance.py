# -*- coding: utf-8 -*-
"""
Utilities for computing distances between particles.
"""

import numpy as np
from scipy.spatial import distance


def pairwise_distances(positions):
    """Condensed array of the distances between every pair of particles.

    Parameters
    ----------
    positions : array_like
        Array of positions with shape (N, 3).

    Returns
    -------
    numpy.ndarray
        Distances ordered as pairs (0, 1), (0, 2), ..., (N - 2, N - 1).
    """
    return distance.pdist(np.asarray(positions, dtype=float), "euclidean")


def min_pair_distance(positions):
    """Smallest distance between any two particles.

    Returns :code:`numpy.inf` for a single particle.
    """
    d = pairwise_distances(positions)
    if d.size == 0:
        return np.inf
    return float(d.min())


def closest_pair(positions):
    """Indices and distance of the closest pair of particles.

    Returns
    -------
    tuple
        :code:`(i, j, r)` with :code:`i < j`. None if there is a single
        particle.
    """
    d = pairwise_distances(positions)
    if d.size == 0:
        return None
    k = int(np.argmin(d))
    n = len(positions)
    i, j = np.triu_indices(n, k=1)
    return int(i[k]), int(j[k]), float(d[k])
