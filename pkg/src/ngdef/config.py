"""Experiment configuration.

A configuration is read from a TOML or JSON file, merged with command-line
flags (flags win) and validated before anything runs.
"""

import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import toml

from .analysis.estimate import EpsSchedule
from .errors import ConfigError
from .models.sampling import BoundedSampler

logger = logging.getLogger('ngdef')

LIMIT_OPS = ("distance", "norm", "sum", "diff", "inv", "dilatation")

# File keys that differ from attribute names.
KEY_ALIASES = {"lambda": "lam"}


@dataclass
class ExperimentConfig:
    """
    Everything a ``verify``, ``limits`` or ``tangent`` run needs.

    ``tol`` bounds relative violations of exact identities, ``limit_tol`` the
    absolute residuals of limit estimates.
    """

    model: Optional[str] = None
    dim: Optional[int] = None
    path: Optional[str] = None
    suites: List[str] = field(default_factory=list)
    samples: int = 1000
    seed: int = 0
    tol: float = 1e-9
    limit_tol: float = 1e-6
    radius: float = 1.0
    center: Any = None
    lam: float = 0.5
    start: int = 1
    steps: int = 24
    op: Optional[str] = None
    base: Any = None
    points: Optional[str] = None
    mu: float = 0.5
    object: Any = None
    check: str = "all"
    out: Optional[str] = None

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any]) -> "ExperimentConfig":
        """
        Build a configuration from file contents.

        Raises:
            ConfigError: For unknown keys
        """
        known = {f.name for f in fields(cls)}
        values = {}
        for key, value in mapping.items():
            name = KEY_ALIASES.get(key, key.replace("-", "_"))
            if name not in known:
                raise ConfigError(f"unknown configuration key '{key}'")
            values[name] = value
        if isinstance(values.get("suites"), str):
            values["suites"] = [values["suites"]]
        return cls(**values)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        """
        Load a configuration file; ``.toml`` files are parsed as TOML, anything else as JSON.

        Raises:
            ConfigError: If the file cannot be read or parsed
        """
        path = Path(path)
        try:
            text = path.read_text()
            data = toml.loads(text) if path.suffix == ".toml" else json.loads(text)
        except (OSError, ValueError, toml.TomlDecodeError) as e:
            raise ConfigError(f"cannot read configuration {path}: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"configuration {path} must be a table of settings")
        logger.info(f"Loaded configuration from {path}")
        return cls.from_mapping(data)

    def merged(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with every override that is not ``None`` (or an empty tuple of suites) applied."""
        values = {k: v for k, v in overrides.items() if v is not None}
        if "suites" in values:
            values["suites"] = list(values["suites"]) or self.suites
        return replace(self, **values)

    def validate(self) -> "ExperimentConfig":
        """
        Check types and ranges.

        Raises:
            ConfigError: With the first offending setting
        """
        def fail(message: str) -> None:
            raise ConfigError(message)

        for name in ("samples", "seed", "start", "steps"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                fail(f"{name} must be an integer, got {value!r}")
        for name in ("tol", "limit_tol", "radius", "lam", "mu"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                fail(f"{name} must be a number, got {value!r}")
        if self.samples < 1:
            fail(f"samples must be at least 1, got {self.samples}")
        if self.tol <= 0 or self.limit_tol <= 0:
            fail("tolerances must be positive")
        if self.radius <= 0:
            fail(f"radius must be positive, got {self.radius}")
        if not 0.0 < self.lam < 1.0:
            fail(f"lambda must lie in (0, 1), got {self.lam}")
        if self.steps < 2:
            fail(f"steps must be at least 2, got {self.steps}")
        if not 0.0 < self.mu < 1.0:
            fail(f"mu must lie in (0, 1), got {self.mu}")
        if self.op is not None and self.op not in LIMIT_OPS:
            fail(f"op must be one of {', '.join(LIMIT_OPS)}, got {self.op!r}")
        if not isinstance(self.suites, list) or not all(isinstance(s, str) for s in self.suites):
            fail("suites must be a list of suite ids")
        return self

    def model_spec(self) -> str:
        """
        The model spec string.

        Raises:
            ConfigError: If no model is configured
        """
        if not self.model:
            raise ConfigError("no model given; pass --model or set 'model' in the configuration")
        return str(self.model)

    def model_params(self) -> Dict[str, Any]:
        return {"dim": self.dim, "path": self.path}

    def schedule(self) -> EpsSchedule:
        return EpsSchedule(float(self.lam), int(self.start), int(self.steps))

    def sampler(self) -> BoundedSampler:
        return BoundedSampler(self.center, float(self.radius), int(self.seed), int(self.samples))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["lambda"] = data.pop("lam")
        return data


DEFAULTS: Dict[str, Any] = ExperimentConfig().to_dict()
