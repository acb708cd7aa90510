# -*- coding: utf-8 -*-
"""
Drawing initial states and noise realisations.

All randomness is derived from integer seeds with
:py:class:`numpy.random.SeedSequence`. Initial state :math:`k` of an ensemble
uses the spawn key :code:`(0, k)` and the Wiener increments of particle
:math:`i` in sample :math:`k` use the spawn key :code:`(1, k, i)`, so every
draw is independent of the order in which samples are evaluated.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from . import config
from .errors import ConfigurationError, DomainError
from .system import DIMENSION, SystemParams, SystemState

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence]

_INITIAL_STATE_KEY = 0
_NOISE_KEY = 1


def _seed_sequence(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(seed), spawn_key=key)


@dataclass(frozen=True)
class InitialDistribution:
    """Distribution of the initial state.

    Positions are uniform in the cube :code:`box**3`. Velocity components are
    either Gaussian with zero mean or uniform.

    Parameters
    ----------
    n_particles : int
        Number of particles.
    box : tuple
        Lower and upper limit of every position component.
    velocity : {'gaussian', 'uniform'}
        Distribution of the velocity components.
    vel_variance : float
        Variance of the Gaussian velocity components.
    vel_bounds : tuple
        Limits of the uniform velocity components.
    min_separation : float
        Particles closer than this to another particle are redrawn.
    """

    n_particles: int
    box: Tuple[float, float] = (0.0, 10.0)
    velocity: str = "gaussian"
    vel_variance: float = 4.0
    vel_bounds: Tuple[float, float] = (0.0, 1.0)
    min_separation: float = 0.0

    def __post_init__(self):
        if self.n_particles < 1:
            raise ConfigurationError("n_particles must be at least 1")
        if not self.box[1] > self.box[0]:
            raise ConfigurationError(f"Invalid box: {self.box}")
        if self.velocity not in ("gaussian", "uniform"):
            raise ConfigurationError(
                f"Unknown velocity distribution: {self.velocity}"
            )
        if not self.vel_variance >= 0:
            raise ConfigurationError(
                f"vel_variance must be non-negative, got {self.vel_variance}"
            )
        if not self.vel_bounds[1] >= self.vel_bounds[0]:
            raise ConfigurationError(
                f"Invalid velocity bounds: {self.vel_bounds}"
            )
        if not self.min_separation >= 0:
            raise ConfigurationError("min_separation must be non-negative")

    @classmethod
    def for_system(cls, params: SystemParams, **kwargs):
        """Distribution for a system where no pair starts closer than
        :code:`overlap_factor * r_m`, see :py:mod:`lanneal.config`."""
        kwargs.setdefault(
            "min_separation", config.general.overlap_factor * params.lj_rmin
        )
        return cls(n_particles=params.n_particles, **kwargs)


def _draw_positions(rng, distribution: InitialDistribution) -> np.ndarray:
    """Draw positions one particle at a time, redrawing a particle that is
    closer than the minimum separation to any particle already placed."""
    positions = np.empty((distribution.n_particles, DIMENSION))
    rejected = 0
    for i in range(distribution.n_particles):
        for _ in range(config.general.max_rejections):
            x = rng.uniform(*distribution.box, size=DIMENSION)
            if i == 0 or distribution.min_separation == 0:
                break
            distances = np.linalg.norm(positions[:i] - x, axis=1)
            if distances.min() >= distribution.min_separation:
                break
            rejected += 1
        else:
            raise ConfigurationError(
                f"Could not place particle {i} at least "
                f"{distribution.min_separation:.4g} from the others in "
                f"{config.general.max_rejections} attempts. Consider using "
                "a larger box."
            )
        positions[i] = x
    if rejected:
        logger.debug(f"Redrew {rejected} overlapping positions")
    return positions


def sample_initial_state(
    distribution: InitialDistribution, seed: SeedLike
) -> SystemState:
    """Draw an initial state.

    Particles are placed in order. A particle closer than
    :code:`distribution.min_separation` to a particle already placed is
    redrawn, so every pair of the returned state is at least that far
    apart. Velocities are drawn after the positions.

    Parameters
    ----------
    distribution : :obj:`InitialDistribution`
        Distribution to draw from.
    seed : int or numpy.random.SeedSequence
        Seed for the generator.

    Returns
    -------
    :obj:`lanneal.system.SystemState`
        The initial state.

    Raises
    ------
    ConfigurationError
        If a particle cannot be placed within the rejection budget.
    """
    rng = np.random.default_rng(seed)
    positions = _draw_positions(rng, distribution)
    shape = positions.shape
    if distribution.velocity == "gaussian":
        velocities = rng.normal(
            0.0, np.sqrt(distribution.vel_variance), size=shape
        )
    else:
        velocities = rng.uniform(*distribution.vel_bounds, size=shape)
    return SystemState(positions, velocities)


def sample_initial_states(
    distribution: InitialDistribution, seed: int, n_samples: int
) -> List[SystemState]:
    """Draw an ensemble of independent initial states.

    State :math:`k` only depends on the seed and :math:`k`.
    """
    return [
        sample_initial_state(
            distribution, _seed_sequence(seed, _INITIAL_STATE_KEY, k)
        )
        for k in range(n_samples)
    ]


@dataclass(frozen=True, eq=False)
class NoiseRealization:
    """Pre-drawn Wiener increments for an ensemble of sample paths.

    Parameters
    ----------
    increments : numpy.ndarray
        Array with shape (M, N_T, N, 3). Each entry has variance
        :code:`dt`.
    seed : int, optional
        Seed used to draw the increments.
    dt : float
        Step size.
    """

    increments: np.ndarray
    seed: Optional[int]
    dt: float

    def __post_init__(self):
        if self.increments.ndim != 4 or self.increments.shape[-1] != DIMENSION:
            raise DomainError(
                "Increments must have shape (M, N_T, N, 3), got "
                f"{self.increments.shape}"
            )

    @property
    def n_samples(self) -> int:
        return self.increments.shape[0]

    @property
    def n_steps(self) -> int:
        return self.increments.shape[1]

    @property
    def n_particles(self) -> int:
        return self.increments.shape[2]

    def path(self, k: int) -> np.ndarray:
        """Increments of sample :math:`k` with shape (N_T, N, 3)."""
        return self.increments[k]

    @classmethod
    def zeros(cls, n_samples, n_steps, n_particles, dt=0.0):
        """Realisation with all increments equal to zero."""
        return cls(
            np.zeros((n_samples, n_steps, n_particles, DIMENSION)), None, dt
        )


def draw_noise(
    seed: int, n_samples: int, n_steps: int, n_particles: int, dt: float
) -> NoiseRealization:
    """Draw Wiener increments with variance :code:`dt`.

    Each (sample, particle) pair has its own substream.

    Parameters
    ----------
    seed : int
        Seed for the realisation.
    n_samples : int
        Number of sample paths :math:`M`.
    n_steps : int
        Number of steps :math:`N_T`.
    n_particles : int
        Number of particles :math:`N`.
    dt : float
        Step size.

    Returns
    -------
    :obj:`NoiseRealization`
        The realisation.
    """
    if dt < 0:
        raise ConfigurationError(f"dt must be non-negative, got {dt}")
    increments = np.empty((n_samples, n_steps, n_particles, DIMENSION))
    scale = np.sqrt(dt)
    for k in range(n_samples):
        for i in range(n_particles):
            rng = np.random.default_rng(_seed_sequence(seed, _NOISE_KEY, k, i))
            increments[k, :, i, :] = scale * rng.standard_normal(
                (n_steps, DIMENSION)
            )
    return NoiseRealization(increments, seed, dt)
