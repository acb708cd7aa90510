# -*- coding: utf-8 -*-
"""
Lennard-Jones potential, forces and the Hamiltonian of the system.

Every function is a pure function of its inputs. Forces are evaluated over
all pairs without a cutoff and per-particle sums are accumulated in ascending
particle order, so results are reproducible.
"""

import logging

import numpy as np

from .errors import DomainError
from .system import SystemParams, SystemState
from .utils.distance import closest_pair, pairwise_distances

logger = logging.getLogger(__name__)


def lj_potential(r, params: SystemParams):
    """Lennard-Jones pair potential.

    .. math::

        \\Phi(r) = \\varepsilon\\left[(r_m / r)^{12} - 2 (r_m / r)^6\\right]

    Parameters
    ----------
    r : float or array_like
        Distance(s) between two particles.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.

    Returns
    -------
    float or numpy.ndarray
        Potential energy. A float if :code:`r` is a scalar.

    Raises
    ------
    DomainError
        If any distance is not positive and finite.
    """
    r_arr = np.asarray(r, dtype=float)
    if not (np.isfinite(r_arr).all() and (r_arr > 0).all()):
        raise DomainError(f"Distance must be positive and finite, got {r}")
    s6 = (params.lj_rmin / r_arr) ** 6
    out = params.lj_depth * (s6 * s6 - 2.0 * s6)
    if out.ndim == 0:
        return float(out)
    return out


def _force_coefficient(r2, params):
    """Coefficient :math:`g` such that the force on i due to j is
    :math:`g (x_j - x_i)`, given the squared distance."""
    inv_r2 = 1.0 / r2
    s6 = (params.lj_rmin**2 * inv_r2) ** 3
    return 12.0 * params.lj_depth * inv_r2 * (s6 - s6 * s6)


def pair_force(x_i, x_j, params: SystemParams) -> np.ndarray:
    """Force on particle i due to particle j.

    Parameters
    ----------
    x_i, x_j : array_like
        Positions of the two particles.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.

    Returns
    -------
    numpy.ndarray
        Force vector. Exactly antisymmetric under swapping the particles.

    Raises
    ------
    DomainError
        If the particles are coincident.
    """
    d = np.asarray(x_j, dtype=float) - np.asarray(x_i, dtype=float)
    r2 = float(np.dot(d, d))
    if r2 < params.min_distance**2:
        raise DomainError(
            f"Coincident particles at distance {np.sqrt(r2):.3e}"
        )
    return _force_coefficient(r2, params) * d


def _separations(positions):
    """Array of separations :code:`d[i, j] = x_j - x_i` and squared norms."""
    d = positions[np.newaxis, :, :] - positions[:, np.newaxis, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    return d, r2


def _check_separation(positions, r2, params):
    n = positions.shape[0]
    if n < 2:
        return
    off_diagonal = r2[~np.eye(n, dtype=bool)]
    if off_diagonal.min() < params.min_distance**2:
        i, j, r = closest_pair(positions)
        raise DomainError(
            f"Particles {i} and {j} are coincident (distance {r:.3e})"
        )


def _sum_over_partners(pairwise):
    """Sum :code:`pairwise[i, j]` over j in ascending order."""
    out = np.zeros_like(pairwise[:, 0])
    for j in range(pairwise.shape[1]):
        out += pairwise[:, j]
    return out


def total_forces(state: SystemState, params: SystemParams) -> np.ndarray:
    """Total force on every particle.

    Parameters
    ----------
    state : :obj:`lanneal.system.SystemState`
        Current state.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.

    Returns
    -------
    numpy.ndarray
        Array of forces with shape (N, 3).

    Raises
    ------
    DomainError
        If any pair is coincident. The error names the closest pair.
    """
    state.check_compatible(params)
    positions = state.positions
    if not params.interactions or state.n_particles < 2:
        return np.zeros_like(positions)
    d, r2 = _separations(positions)
    _check_separation(positions, r2, params)
    np.fill_diagonal(r2, np.inf)
    g = _force_coefficient(r2, params)
    return _sum_over_partners(g[:, :, np.newaxis] * d)


def path_forces(positions, params: SystemParams, chunk: int = 500):
    """Total force on every particle at every time of a trajectory.

    Vectorised version of :py:func:`total_forces` over the leading axis.

    Parameters
    ----------
    positions : array_like
        Positions with shape (n_times, N, 3).
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    chunk : int
        Number of times evaluated at once.

    Returns
    -------
    numpy.ndarray
        Array of forces with shape (n_times, N, 3).

    Raises
    ------
    DomainError
        If any pair is coincident at any time.
    """
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 3 or positions.shape[2] != 3:
        raise DomainError(
            f"Positions must have shape (n_times, N, 3), got "
            f"{positions.shape}"
        )
    forces = np.zeros_like(positions)
    n = positions.shape[1]
    if not params.interactions or n < 2:
        return forces
    diagonal = np.eye(n, dtype=bool)
    for start in range(0, positions.shape[0], chunk):
        x = positions[start : start + chunk]
        d = x[:, np.newaxis, :, :] - x[:, :, np.newaxis, :]
        r2 = np.einsum("tijk,tijk->tij", d, d)
        r2[:, diagonal] = np.inf
        if r2.min() < params.min_distance**2:
            t = int(np.argmin(r2.min(axis=(1, 2))))
            i, j, r = closest_pair(x[t])
            raise DomainError(
                f"Particles {i} and {j} are coincident (distance {r:.3e}) "
                f"at index {start + t}"
            )
        pairwise = _force_coefficient(r2, params)[..., np.newaxis] * d
        for j in range(n):
            forces[start : start + chunk] += pairwise[:, :, j]
    return forces


def force_jacobian_product(
    state: SystemState, w, params: SystemParams
) -> np.ndarray:
    """Product of the Jacobian of the forces with respect to the positions
    and a perturbation of the positions.

    The Jacobian is the negative Hessian of the potential and is therefore
    symmetric, so this is also the transposed product.

    Parameters
    ----------
    state : :obj:`lanneal.system.SystemState`
        State at which the Jacobian is evaluated.
    w : array_like
        Perturbation with shape (N, 3).
    params : :obj:`lanneal.system.SystemParams`
        System parameters.

    Returns
    -------
    numpy.ndarray
        Array with shape (N, 3).
    """
    w = np.asarray(w, dtype=float)
    positions = state.positions
    if w.shape != positions.shape:
        raise DomainError(
            f"Perturbation must have shape {positions.shape}, got {w.shape}"
        )
    if not params.interactions or state.n_particles < 2:
        return np.zeros_like(positions)
    d, r2 = _separations(positions)
    _check_separation(positions, r2, params)
    np.fill_diagonal(r2, np.inf)
    inv_r2 = 1.0 / r2
    s6 = (params.lj_rmin**2 * inv_r2) ** 3
    g = 12.0 * params.lj_depth * inv_r2 * (s6 - s6 * s6)
    # g'(r) / r
    h = 12.0 * params.lj_depth * inv_r2**2 * (14.0 * s6 * s6 - 8.0 * s6)
    dw = w[np.newaxis, :, :] - w[:, np.newaxis, :]
    projection = np.einsum("ijk,ijk->ij", d, dw)
    pairwise = g[:, :, np.newaxis] * dw + (h * projection)[
        :, :, np.newaxis
    ] * d
    return _sum_over_partners(pairwise)


def kinetic_energy(state: SystemState) -> float:
    """Kinetic energy of unit-mass particles."""
    return 0.5 * float(np.sum(state.velocities**2))


def potential_energy(state: SystemState, params: SystemParams) -> float:
    """Total Lennard-Jones energy summed over distinct pairs.

    Raises
    ------
    DomainError
        If any pair is coincident.
    """
    state.check_compatible(params)
    if not params.interactions or state.n_particles < 2:
        return 0.0
    r = pairwise_distances(state.positions)
    if r.min() < params.min_distance:
        i, j, r_min = closest_pair(state.positions)
        raise DomainError(
            f"Particles {i} and {j} are coincident (distance {r_min:.3e})"
        )
    return float(np.sum(lj_potential(r, params)))


def hamiltonian(state: SystemState, params: SystemParams) -> float:
    """Hamiltonian (total energy) of the system.

    Parameters
    ----------
    state : :obj:`lanneal.system.SystemState`
        Current state.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.

    Returns
    -------
    float
        Kinetic plus potential energy.
    """
    return kinetic_energy(state) + potential_energy(state, params)


def pairwise_distance_floor(
    h0: float, params: SystemParams, tight: bool = False
) -> float:
    """Lower bound on every pair distance along a noise-free trajectory.

    Since the noise-free Hamiltonian cannot increase and every pair energy
    is at least :math:`-\\varepsilon`, any pair distance :math:`r` satisfies

    .. math::

        \\Phi(r) \\leq H(0) + \\varepsilon P

    where :math:`P = N(N - 1) / 2`. With :code:`tight=True` the pair itself
    is excluded from the bound on the other pairs, giving
    :math:`\\Phi(r) \\leq H(0) + \\varepsilon (P - 1)`.

    The bound is solved as a quadratic in :math:`s = (r_m / r)^6`. For two
    particles with :math:`H(0) = -\\varepsilon` the default bound gives
    :math:`2^{-1/6} r_m` and the tight bound gives :math:`r_m`.

    Parameters
    ----------
    h0 : float
        Initial value of the Hamiltonian.
    params : :obj:`lanneal.system.SystemParams`
        System parameters.
    tight : bool
        Use the tighter bound.

    Returns
    -------
    float
        The floor :math:`r_{lo}`. Zero if :code:`h0` is infinite.
    """
    if np.isnan(h0):
        raise DomainError("Initial Hamiltonian is NaN")
    if h0 == np.inf:
        return 0.0
    n_other = params.n_pairs - 1 if tight else params.n_pairs
    c = (h0 + params.lj_depth * max(n_other, 0)) / params.lj_depth
    disc = 1.0 + c
    if disc < 0:
        if disc < -1e-12 * max(1.0, abs(c)):
            raise DomainError(
                f"Initial Hamiltonian {h0} is below the minimum possible "
                "energy"
            )
        disc = 0.0
    s_max = 1.0 + np.sqrt(disc)
    return float(params.lj_rmin / s_max ** (1.0 / 6.0))
