# -*- coding: utf-8 -*-
"""
Global configuration for lanneal.
"""

from dataclasses import asdict, dataclass, field
from typing import List


@dataclass
class _BaseConfig:
    """Base class for all configs"""

    def asdict(self):
        """Return the config as a dictionary."""
        return asdict(self)


@dataclass
class GeneralConfig(_BaseConfig):
    """General numerical configuration options"""

    coincidence_tol: float = 1e-9
    """Distances below this fraction of :code:`r_m` are treated as
    coincident particles."""
    overlap_factor: float = 2.0 ** (-1.0 / 6.0)
    """Smallest initial pair distance as a fraction of :code:`r_m`. The
    default is the zero of the pair potential, so no pair starts on the
    repulsive wall where the explicit force step is unstable."""
    max_rejections: int = 1000
    """Maximum number of attempts per particle when drawing an initial
    state."""
    gradient_floor: float = 1e-12
    """Smallest temperature at which the gradient with respect to the
    temperature itself is evaluated."""
    float_format: str = "%.17g"
    """Format used for floats in CSV outputs."""


@dataclass
class PlottingConfig(_BaseConfig):
    """Configuration for plotting."""

    disable_style: bool = False
    """Disable lanneal's custom plotting style globally.

    Useful since all plotting functions use the
    :py:func:`~lanneal.plot.lanneal_style` decorator by default.
    """
    sns_style: str = "ticks"
    """Default seaborn style."""
    base_colour: str = "#02979d"
    """Base colour for plots."""
    highlight_colour: str = "#f5b754"
    """Highlight colour for plots."""
    line_colours: List[str] = field(
        default_factory=lambda: ["#4575b4", "#d73027", "#fad117", "#ff8c00"]
    )
    """Default line colours."""
    line_styles: List[str] = field(
        default_factory=lambda: ["-", "--", ":", "-."]
    )
    """Default line styles."""
    file_extension: str = "svg"
    """Extension (and format) used when saving figures."""


general = GeneralConfig()
plotting = PlottingConfig()
