# -*- coding: utf-8 -*-
"""
Configuration of the experiments run by the command line interface.

The configuration is a tree of dataclasses, one per section, and is stored as
a JSON object with flat dotted keys, e.g. :code:`"system.n": 30`.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple, get_type_hints

import numpy as np

from .errors import ConfigurationError
from .grid import TimeGrid
from .sampling import InitialDistribution
from .solvers import SolverOptions, available_solvers
from .system import SystemParams
from .utils.io import save_to_json

logger = logging.getLogger(__name__)

SCHEDULE_SOURCES = ("optimize", "newton", "constant", "file")


@dataclass
class SystemSection:
    n: int = 30
    b: float = 2.0
    noise: bool = True
    interactions: bool = True


@dataclass
class LJSection:
    epsilon: float = 3.0
    rmin: float = 2.0


@dataclass
class GridSection:
    horizon: float = 10.0
    steps: int = 100


@dataclass
class InitSection:
    box: Tuple[float, float] = (0.0, 10.0)
    velocity: str = "gaussian"
    vel_variance: float = 4.0
    vel_low: float = 0.0
    vel_high: float = 1.0
    min_separation: Optional[float] = None
    """Smallest initial pair distance. Defaults to the zero of the pair
    potential."""


@dataclass
class ControlSection:
    umin: float = 0.0
    umax: Optional[float] = 50.0
    """None means no upper bound."""
    monotone: bool = True
    literal_heating: bool = False


@dataclass
class ScheduleSection:
    source: str = "optimize"
    compare: str = "newton"
    file: Optional[str] = None
    constant: Optional[float] = None


@dataclass
class NewtonSection:
    u0: Optional[float] = None
    """Defaults to the upper bound."""
    u_env: Optional[float] = None
    """Defaults to the lower bound."""
    rate: Optional[float] = None
    """Defaults to the rate that leaves 1% of the difference at the
    horizon."""


@dataclass
class SolverSection:
    name: str = "projected-gradient"
    m: int = 100
    max_iter: int = 500
    tol: float = 1e-6
    initial_step: float = 1.0
    armijo: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 50


@dataclass
class HoldoutSection:
    m: int = 200


@dataclass
class SeedSection:
    train: int = 1234
    holdout: int = 5678


@dataclass
class VerifySection:
    v_tol: float = 1e-4
    f_tol: float = 1e-3
    distance_slack: float = 0.9
    step_tol: float = 10.0


@dataclass
class OutSection:
    dir: str = "outdir"
    plots: bool = True
    format: str = "json"


@dataclass
class ExperimentConfig:
    """Configuration of an experiment.

    The defaults are the controlled experiment with 30 particles. Use
    :py:meth:`preset` for the noise-free experiment.
    """

    system: SystemSection = field(default_factory=SystemSection)
    lj: LJSection = field(default_factory=LJSection)
    grid: GridSection = field(default_factory=GridSection)
    init: InitSection = field(default_factory=InitSection)
    control: ControlSection = field(default_factory=ControlSection)
    schedule: ScheduleSection = field(default_factory=ScheduleSection)
    newton: NewtonSection = field(default_factory=NewtonSection)
    solver: SolverSection = field(default_factory=SolverSection)
    holdout: HoldoutSection = field(default_factory=HoldoutSection)
    seed: SeedSection = field(default_factory=SeedSection)
    verify: VerifySection = field(default_factory=VerifySection)
    out: OutSection = field(default_factory=OutSection)

    @classmethod
    def preset(cls, name: str) -> "ExperimentConfig":
        """Configuration of one of the reference experiments.

        Parameters
        ----------
        name : {'controlled', 'noise-free'}
            :code:`controlled` is the schedule optimisation with 30
            particles. :code:`noise-free` is the convergence experiment with
            20 particles, uniform velocities in :math:`[0, 1]^3` and
            :math:`T = 100`.
        """
        if name == "controlled":
            return cls()
        if name == "noise-free":
            return cls.from_flat(
                {
                    "system.n": 20,
                    "system.b": 1.0,
                    "system.noise": False,
                    "lj.epsilon": 1.0,
                    "lj.rmin": 2.0,
                    "grid.horizon": 100.0,
                    "grid.steps": 10000,
                    "init.velocity": "uniform",
                    "init.vel_low": 0.0,
                    "init.vel_high": 1.0,
                }
            )
        raise ConfigurationError(
            f"Unknown preset: {name}. Choose from: [controlled, noise-free]"
        )

    def to_flat(self) -> Dict[str, Any]:
        """Dictionary with flat dotted keys."""
        flat = {}
        for section in fields(self):
            for key, value in asdict(getattr(self, section.name)).items():
                if isinstance(value, tuple):
                    value = list(value)
                flat[f"{section.name}.{key}"] = value
        return flat

    @classmethod
    def from_flat(
        cls, flat: Dict[str, Any], base: Optional["ExperimentConfig"] = None
    ) -> "ExperimentConfig":
        """Create a configuration from a dictionary with flat dotted keys.

        Parameters
        ----------
        flat : dict
            Values keyed by :code:`section.key`. Missing keys take the value
            in :code:`base`.
        base : :obj:`ExperimentConfig`, optional
            Configuration providing the values of the missing keys. Defaults
            to the default configuration.

        Raises
        ------
        ConfigurationError
            If a key is unknown or a value has the wrong type or is out of
            range. The error names the key.
        """
        values = (base or cls()).to_flat()
        for key, value in flat.items():
            if key not in values:
                raise ConfigurationError(f"Unknown configuration key: {key}")
            values[key] = value
        sections = {}
        for section in fields(cls):
            section_cls = section.default_factory
            hints = get_type_hints(section_cls)
            kwargs = {}
            for f in fields(section_cls):
                key = f"{section.name}.{f.name}"
                kwargs[f.name] = _coerce(key, values[key], hints[f.name])
            sections[section.name] = section_cls(**kwargs)
        config = cls(**sections)
        config.validate()
        return config

    def with_overrides(self, overrides: List[str]) -> "ExperimentConfig":
        """Apply overrides of the form :code:`key=value`.

        Values are parsed as JSON literals. Values that are not valid JSON
        are used as strings.
        """
        return self.from_flat(parse_overrides(overrides), base=self)

    def validate(self) -> None:
        """Check every value is within its documented range.

        Raises
        ------
        ConfigurationError
            Naming the first invalid key.
        """
        checks = [
            ("system.n", self.system.n >= 1, "must be at least 1"),
            ("system.b", self.system.b > 0, "must be positive"),
            ("lj.epsilon", self.lj.epsilon > 0, "must be positive"),
            ("lj.rmin", self.lj.rmin > 0, "must be positive"),
            ("grid.horizon", self.grid.horizon >= 0, "must be non-negative"),
            ("grid.steps", self.grid.steps >= 0, "must be non-negative"),
            (
                "grid.horizon",
                self.grid.steps == 0 or self.grid.horizon > 0,
                "must be positive when grid.steps > 0",
            ),
            (
                "init.box",
                self.init.box[1] > self.init.box[0],
                "must be [low, high] with low < high",
            ),
            (
                "init.velocity",
                self.init.velocity in ("gaussian", "uniform"),
                "must be one of [gaussian, uniform]",
            ),
            (
                "init.vel_variance",
                self.init.vel_variance >= 0,
                "must be non-negative",
            ),
            (
                "init.min_separation",
                self.init.min_separation is None
                or self.init.min_separation >= 0,
                "must be non-negative",
            ),
            (
                "init.vel_high",
                self.init.vel_high >= self.init.vel_low,
                "must be at least init.vel_low",
            ),
            ("control.umin", self.control.umin >= 0, "must be non-negative"),
            (
                "control.umax",
                self.control.umax is None
                or self.control.umax >= self.control.umin,
                "must be at least control.umin",
            ),
            (
                "schedule.source",
                self.schedule.source in SCHEDULE_SOURCES,
                f"must be one of {list(SCHEDULE_SOURCES)}",
            ),
            (
                "schedule.compare",
                self.schedule.compare in SCHEDULE_SOURCES,
                f"must be one of {list(SCHEDULE_SOURCES)}",
            ),
            (
                "schedule.constant",
                self.schedule.constant is None or self.schedule.constant >= 0,
                "must be non-negative",
            ),
            (
                "newton.rate",
                self.newton.rate is None or self.newton.rate > 0,
                "must be positive",
            ),
            (
                "solver.name",
                self.solver.name in available_solvers(),
                f"must be one of {list(available_solvers())}",
            ),
            ("solver.m", self.solver.m >= 1, "must be at least 1"),
            ("holdout.m", self.holdout.m >= 1, "must be at least 1"),
            (
                "seed.holdout",
                self.seed.train != self.seed.holdout,
                "must differ from seed.train",
            ),
            (
                "verify.distance_slack",
                0 < self.verify.distance_slack <= 1,
                "must be in (0, 1]",
            ),
            ("verify.v_tol", self.verify.v_tol > 0, "must be positive"),
            ("verify.f_tol", self.verify.f_tol > 0, "must be positive"),
            (
                "out.format",
                self.out.format in ("json", "hdf5"),
                "must be one of [json, hdf5]",
            ),
        ]
        for key, ok, message in checks:
            if not ok:
                raise ConfigurationError(f"Invalid value for {key}: {message}")
        for name in ("source", "compare"):
            if getattr(self.schedule, name) == "file":
                if self.schedule.file is None:
                    raise ConfigurationError(
                        f"schedule.file is required when schedule.{name} "
                        "is `file`"
                    )
                if not os.path.exists(self.schedule.file):
                    raise ConfigurationError(
                        f"Invalid value for schedule.file: "
                        f"{self.schedule.file} does not exist"
                    )
            if (
                getattr(self.schedule, name) == "constant"
                and self.schedule.constant is None
            ):
                raise ConfigurationError(
                    f"schedule.constant is required when schedule.{name} is "
                    "`constant`"
                )
        try:
            self.solver_options()
        except ConfigurationError as e:
            raise ConfigurationError(f"Invalid solver option: {e}") from e

    @property
    def bounds(self) -> Tuple[float, float]:
        u_max = np.inf if self.control.umax is None else self.control.umax
        return self.control.umin, u_max

    def system_params(self) -> SystemParams:
        return SystemParams(
            n_particles=self.system.n,
            damping=self.system.b,
            lj_depth=self.lj.epsilon,
            lj_rmin=self.lj.rmin,
            interactions=self.system.interactions,
        )

    def time_grid(self) -> TimeGrid:
        return TimeGrid(horizon=self.grid.horizon, n_steps=self.grid.steps)

    def initial_distribution(self) -> InitialDistribution:
        separation = {}
        if self.init.min_separation is not None:
            separation["min_separation"] = self.init.min_separation
        return InitialDistribution.for_system(
            self.system_params(),
            box=tuple(self.init.box),
            velocity=self.init.velocity,
            vel_variance=self.init.vel_variance,
            vel_bounds=(self.init.vel_low, self.init.vel_high),
            **separation,
        )

    def solver_options(self) -> SolverOptions:
        return SolverOptions(
            max_iter=self.solver.max_iter,
            tol=self.solver.tol,
            initial_step=self.solver.initial_step,
            armijo=self.solver.armijo,
            backtrack=self.solver.backtrack,
            max_backtracks=self.solver.max_backtracks,
            dump_dir=self.out.dir,
        )

    def dumps(self) -> str:
        """Canonical JSON representation."""
        return json.dumps(self.to_flat(), indent=4, sort_keys=True) + "\n"

    def save(self, filename: str) -> None:
        """Save the configuration in canonical form."""
        save_to_json(self.to_flat(), filename)


def _coerce(key: str, value: Any, hint) -> Any:
    """Convert a value to the type of a field."""
    optional = getattr(hint, "__origin__", None) is not None and type(
        None
    ) in getattr(hint, "__args__", ())
    if value is None:
        if optional:
            return None
        raise ConfigurationError(f"Invalid value for {key}: cannot be null")
    if optional:
        hint = next(a for a in hint.__args__ if a is not type(None))
    origin = getattr(hint, "__origin__", None)
    try:
        if hint is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        if hint is int:
            if isinstance(value, bool) or int(value) != value:
                raise TypeError
            return int(value)
        if hint is float:
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if hint is str:
            if not isinstance(value, str):
                raise TypeError
            return value
        if origin is tuple:
            if isinstance(value, str) or len(value) != len(hint.__args__):
                raise TypeError
            return tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigurationError(
            f"Invalid value for {key}: {value!r} is not of type "
            f"{getattr(hint, '__name__', hint)}"
        )
    raise ConfigurationError(f"Unsupported type for {key}: {hint}")


def parse_overrides(overrides: Optional[List[str]]) -> Dict[str, Any]:
    """Parse overrides of the form :code:`key=value`.

    Raises
    ------
    ConfigurationError
        If an override does not contain :code:`=`.
    """
    out = {}
    for item in overrides or []:
        if "=" not in item:
            raise ConfigurationError(
                f"Invalid override `{item}`, expected key=value"
            )
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        out[key.strip()] = value
    return out


def load_config(
    filename: Optional[str] = None,
    overrides: Optional[List[str]] = None,
    preset: str = "controlled",
) -> ExperimentConfig:
    """Load a configuration file and apply overrides.

    Parameters
    ----------
    filename : str, optional
        Path to a JSON file with flat dotted keys. Keys that are not
        specified take the value of the preset.
    overrides : list, optional
        Overrides of the form :code:`key=value`.
    preset : str
        Preset providing the defaults.

    Raises
    ------
    ConfigurationError
        If the file cannot be parsed or contains invalid values.
    """
    base = ExperimentConfig.preset(preset)
    flat = {}
    if filename is not None:
        try:
            with open(filename, "r") as fp:
                flat = json.load(fp)
        except FileNotFoundError:
            raise ConfigurationError(f"Config file not found: {filename}")
        except json.JSONDecodeError as e:
            raise ConfigurationError(
                f"Could not parse {filename}: line {e.lineno}, column "
                f"{e.colno}: {e.msg}"
            )
        if not isinstance(flat, dict):
            raise ConfigurationError(
                f"Config file {filename} must contain a JSON object"
            )
    flat.update(parse_overrides(overrides))
    logger.debug(f"Loaded configuration with {len(flat)} explicit keys")
    return ExperimentConfig.from_flat(flat, base=base)
