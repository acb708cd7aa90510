# -*- coding: utf-8 -*-
"""
Uniform time grid used to discretise the dynamics.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid :math:`t_n = n \\Delta t` for :math:`n = 0, \\dots, N_T`.

    A grid with zero steps only contains :math:`t_0 = 0`.

    Parameters
    ----------
    horizon : float
        Final time :math:`T`.
    n_steps : int
        Number of steps :math:`N_T`.
    """

    horizon: float
    n_steps: int

    def __post_init__(self):
        if int(self.n_steps) != self.n_steps or self.n_steps < 0:
            raise ConfigurationError(
                f"n_steps must be a non-negative integer, got {self.n_steps}"
            )
        if not (np.isfinite(self.horizon) and self.horizon >= 0):
            raise ConfigurationError(
                f"horizon must be non-negative and finite, got {self.horizon}"
            )
        if self.n_steps > 0 and self.horizon == 0:
            raise ConfigurationError("horizon must be positive")

    @classmethod
    def from_dt(cls, horizon: float, dt: float) -> "TimeGrid":
        """Construct a grid from the horizon and the step size.

        Raises
        ------
        ConfigurationError
            If the horizon is not a whole number of steps.
        """
        if not dt > 0:
            raise ConfigurationError(f"dt must be positive, got {dt}")
        n_steps = int(round(horizon / dt))
        if not np.isclose(n_steps * dt, horizon, rtol=1e-9, atol=0.0):
            raise ConfigurationError(
                f"horizon {horizon} is not a multiple of dt {dt}"
            )
        return cls(horizon=float(horizon), n_steps=n_steps)

    @property
    def dt(self) -> float:
        """Step size :math:`\\Delta t = T / N_T`. Zero for an empty grid."""
        if self.n_steps == 0:
            return 0.0
        return self.horizon / self.n_steps

    @property
    def times(self) -> np.ndarray:
        """Array of the :math:`N_T + 1` grid times."""
        return np.linspace(0.0, self.horizon, self.n_steps + 1)

    def refined(self, factor: int = 2) -> "TimeGrid":
        """Grid over the same horizon with the step divided by a factor."""
        return TimeGrid(self.horizon, self.n_steps * factor)
