# -*- coding: utf-8 -*-
"""
Record of a single rollout.
"""

import logging
import os
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import pandas as pd

from .potential import hamiltonian
from .system import SystemParams, SystemState
from .utils.io import save_dataframe

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class TrajectoryRecord:
    """Time series of the states of one rollout and their diagnostics.

    Parameters
    ----------
    times : numpy.ndarray
        Grid times with shape (N_T + 1,).
    positions : numpy.ndarray
        Positions with shape (N_T + 1, N, 3).
    velocities : numpy.ndarray
        Velocities with shape (N_T + 1, N, 3).
    hamiltonians : numpy.ndarray
        Hamiltonian at every grid time.
    min_pair_distance : numpy.ndarray
        Smallest pair distance at every grid time. Infinite for a single
        particle.
    controls : numpy.ndarray
        Temperature :math:`u(t_n)` at every grid time. The value at
        :math:`t_{n+1}` is the one applied in step :math:`n`.
    noisy : bool
        Whether the rollout included thermal noise.
    """

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    hamiltonians: np.ndarray
    min_pair_distance: np.ndarray
    controls: np.ndarray
    noisy: bool = False

    def __post_init__(self):
        n = len(self.times)
        for name in [
            "positions",
            "velocities",
            "hamiltonians",
            "min_pair_distance",
            "controls",
        ]:
            if len(getattr(self, name)) != n:
                raise ValueError(
                    f"{name} has length {len(getattr(self, name))}, "
                    f"expected {n}"
                )

    def __len__(self):
        return len(self.times)

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1

    @property
    def n_particles(self) -> int:
        return self.positions.shape[1]

    @property
    def dt(self) -> float:
        if self.n_steps == 0:
            return 0.0
        return float(self.times[1] - self.times[0])

    @property
    def states(self) -> List[SystemState]:
        """List of every recorded state."""
        return [
            SystemState(x, v) for x, v in zip(self.positions, self.velocities)
        ]

    def state(self, n: int) -> SystemState:
        """State at grid index :code:`n`."""
        return SystemState(self.positions[n], self.velocities[n])

    @property
    def initial_state(self) -> SystemState:
        return self.state(0)

    @property
    def final_state(self) -> SystemState:
        return self.state(-1)

    def recompute_hamiltonians(self, params: SystemParams) -> np.ndarray:
        """Hamiltonian recomputed from the recorded states."""
        return np.array([hamiltonian(s, params) for s in self.states])

    def squared_speeds(self) -> np.ndarray:
        """Sum over particles of :math:`V_i^T V_i` at every grid time."""
        return np.sum(self.velocities**2, axis=(1, 2))

    def to_frames(self):
        """Convert the record to data frames.

        Returns
        -------
        particles : pandas.DataFrame
            One row per particle per step with columns
            :code:`step,time,particle,x,y,z,vx,vy,vz`.
        summary : pandas.DataFrame
            One row per step with columns
            :code:`step,time,hamiltonian,min_pair_distance,u`.
        """
        n_times, n_particles = self.positions.shape[:2]
        steps = np.repeat(np.arange(n_times), n_particles)
        particles = pd.DataFrame(
            {
                "step": steps,
                "time": self.times[steps],
                "particle": np.tile(np.arange(n_particles), n_times),
            }
        )
        x = self.positions.reshape(-1, 3)
        v = self.velocities.reshape(-1, 3)
        for j, axis in enumerate("xyz"):
            particles[axis] = x[:, j]
        for j, axis in enumerate("xyz"):
            particles[f"v{axis}"] = v[:, j]
        summary = pd.DataFrame(
            {
                "step": np.arange(n_times),
                "time": self.times,
                "hamiltonian": self.hamiltonians,
                "min_pair_distance": self.min_pair_distance,
                "u": self.controls,
            }
        )
        return particles, summary

    def save(self, output: str, prefix: Optional[str] = "trajectory"):
        """Save the particle and summary CSV files.

        Parameters
        ----------
        output : str
            Output directory. Created if it does not exist.
        prefix : str
            Prefix for the filenames :code:`<prefix>.csv` and
            :code:`<prefix>_summary.csv`.

        Returns
        -------
        tuple
            Paths to the two files.
        """
        os.makedirs(output, exist_ok=True)
        particles, summary = self.to_frames()
        particles_file = os.path.join(output, f"{prefix}.csv")
        summary_file = os.path.join(output, f"{prefix}_summary.csv")
        save_dataframe(particles, particles_file)
        save_dataframe(summary, summary_file)
        logger.debug(f"Saved trajectory to {particles_file}")
        return particles_file, summary_file
