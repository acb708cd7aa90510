# -*- coding: utf-8 -*-
"""
Exceptions raised by lanneal.
"""

from typing import Optional


class DomainError(ValueError):
    """Exception raised for inputs outside the physical domain, e.g.
    coincident particles or a negative temperature."""

    pass


class ConfigurationError(ValueError):
    """Exception raised for invalid options or configuration files."""

    pass


class StatisticalPowerError(ValueError):
    """Exception raised when an ensemble is too small for a statistical
    check."""

    pass


class MisuseError(RuntimeError):
    """Exception raised when a check is applied to the wrong kind of
    trajectory."""

    pass


class RolloutError(RuntimeError):
    """Exception raised when a rollout fails.

    Parameters
    ----------
    message : str
        Description of the failure.
    step : int, optional
        Index of the step that failed.
    sample : int, optional
        Index of the sample path that failed.
    """

    def __init__(
        self,
        message: str,
        step: Optional[int] = None,
        sample: Optional[int] = None,
    ):
        self.step = step
        self.sample = sample
        location = []
        if sample is not None:
            location.append(f"sample {sample}")
        if step is not None:
            location.append(f"step {step}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class OptimizationError(RuntimeError):
    """Exception raised when the schedule optimisation fails.

    Parameters
    ----------
    message : str
        Description of the failure.
    dump_path : str, optional
        Path to the file containing the offending iterate.
    """

    def __init__(self, message: str, dump_path: Optional[str] = None):
        self.dump_path = dump_path
        if dump_path is not None:
            message = f"{message}. Iterate saved to: {dump_path}"
        super().__init__(message)
