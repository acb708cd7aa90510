# -*- coding: utf-8 -*-
"""
Parameters and states of a system of Lennard-Jones particles.
"""

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import ConfigurationError, DomainError

DIMENSION = 3
"""Number of spatial dimensions."""


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the system.

    Particles have unit mass.

    Parameters
    ----------
    n_particles : int
        Number of particles :math:`N`.
    damping : float
        Damping coefficient :math:`B`.
    lj_depth : float
        Depth of the Lennard-Jones well :math:`\\varepsilon`.
    lj_rmin : float
        Distance at which the Lennard-Jones potential is minimal,
        :math:`r_m`.
    interactions : bool
        If False, the particles do not interact. Used for toy problems
        where only damping and noise act on the particles.
    """

    n_particles: int
    damping: float = 2.0
    lj_depth: float = 3.0
    lj_rmin: float = 2.0
    interactions: bool = True

    def __post_init__(self):
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise ConfigurationError(
                f"n_particles must be a positive integer, got "
                f"{self.n_particles}"
            )
        for name in ["damping", "lj_depth", "lj_rmin"]:
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ConfigurationError(
                    f"{name} must be positive and finite, got {value}"
                )

    @property
    def n_pairs(self) -> int:
        """Number of distinct pairs of particles."""
        return self.n_particles * (self.n_particles - 1) // 2

    @property
    def min_distance(self) -> float:
        """Distance below which two particles are treated as coincident."""
        return config.general.coincidence_tol * self.lj_rmin


class SystemState:
    """Positions and velocities of every particle at one instant.

    The arrays are copied and made read-only.

    Parameters
    ----------
    positions : array_like
        Positions with shape (N, 3).
    velocities : array_like, optional
        Velocities with shape (N, 3). Defaults to zero.
    """

    __slots__ = ("positions", "velocities")

    def __init__(self, positions, velocities=None):
        positions = np.array(positions, dtype=float)
        if velocities is None:
            velocities = np.zeros_like(positions)
        else:
            velocities = np.array(velocities, dtype=float)
        if positions.ndim != 2 or positions.shape[1] != DIMENSION:
            raise DomainError(
                f"positions must have shape (N, {DIMENSION}), got "
                f"{positions.shape}"
            )
        if velocities.shape != positions.shape:
            raise DomainError(
                f"velocities must have shape {positions.shape}, got "
                f"{velocities.shape}"
            )
        finite = np.isfinite(positions).all() and np.isfinite(velocities).all()
        if not finite:
            raise DomainError("State contains non-finite values")
        positions.flags.writeable = False
        velocities.flags.writeable = False
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "velocities", velocities)

    def __setattr__(self, name, value):
        raise AttributeError("SystemState is immutable")

    def __repr__(self):
        return f"SystemState(n_particles={self.n_particles})"

    def __eq__(self, other):
        if not isinstance(other, SystemState):
            return NotImplemented
        return np.array_equal(
            self.positions, other.positions
        ) and np.array_equal(self.velocities, other.velocities)

    __hash__ = None

    def __reduce__(self):
        return (SystemState, (self.positions, self.velocities))

    @property
    def n_particles(self) -> int:
        """Number of particles."""
        return self.positions.shape[0]

    def check_compatible(self, params: SystemParams) -> None:
        """Check the state matches the number of particles in the params.

        Raises
        ------
        DomainError
            If the number of particles differs.
        """
        if self.n_particles != params.n_particles:
            raise DomainError(
                f"State has {self.n_particles} particles but the system has "
                f"{params.n_particles}"
            )

    def translated(self, shift) -> "SystemState":
        """Copy of the state with every position shifted."""
        return SystemState(self.positions + np.asarray(shift), self.velocities)

    def permuted(self, order) -> "SystemState":
        """Copy of the state with the particles reordered."""
        order = np.asarray(order)
        return SystemState(self.positions[order], self.velocities[order])
