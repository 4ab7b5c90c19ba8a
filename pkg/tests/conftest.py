"""Pytest configuration and shared fixtures for ngdef tests."""

import json
import os
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pytest
import toml
from click.testing import CliRunner

from ngdef.analysis import EpsSchedule
from ngdef.main import Experiment
from ngdef.models import BoundedSampler, build_model, default_model_registry


@pytest.fixture
def model_registry():
    """Registry with every built-in model."""
    return default_model_registry()


@pytest.fixture
def euclidean_line(model_registry):
    return build_model("euclidean(1)", model_registry)


@pytest.fixture
def euclidean_plane(model_registry):
    return build_model("euclidean(2)", model_registry)


@pytest.fixture
def heisenberg(model_registry):
    return build_model("heisenberg", model_registry)


@pytest.fixture
def translation_line(model_registry):
    return build_model("translation-action(1)", model_registry)


@pytest.fixture
def triangle(model_registry):
    """Complete groupoid on three objects with a metric norm."""
    return build_model("finite(triangle)", model_registry)


@pytest.fixture
def z5_irq(model_registry):
    """``x circ y = x + 2(y - x)`` and ``x bullet y = x + 3(y - x)`` mod 5."""
    return build_model("finite(z5_affine_irq)", model_registry).irq


@pytest.fixture
def sampler():
    """Small seeded sampler for the unit tests."""
    return BoundedSampler(seed=0, count=8)


@pytest.fixture
def schedule():
    """The default schedule: lambda = 1/2, 24 steps."""
    return EpsSchedule()


@pytest.fixture
def short_schedule():
    return EpsSchedule(0.5, 1, 12)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def experiment():
    return Experiment()


@pytest.fixture
def points_file(tmp_path):
    """Factory writing a points file and returning its path."""
    def write(rows: Any, name: str = "points.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(rows))
        return str(path)
    return write


@pytest.fixture
def config_file(tmp_path):
    """Factory writing a TOML or JSON configuration and returning its path."""
    def write(config: Dict[str, Any], name: str = "experiment.toml") -> str:
        return str(create_test_config(tmp_path / name, config))
    return write


@pytest.fixture(autouse=True)
def clean_environment():
    """Clear ngdef environment variables before each test."""
    original_env = os.environ.copy()
    os.environ.pop("NGDEF_SEED", None)

    yield

    os.environ.clear()
    os.environ.update(original_env)


# Helper functions for tests
def create_test_config(path: Path, config: Dict[str, Any]) -> Path:
    """Write a configuration file; ``.toml`` paths get TOML, others JSON."""
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".toml":
        with open(path, "w") as f:
            toml.dump(config, f)
    else:
        path.write_text(json.dumps(config))
    return path


def offset_arrow(bundle, x: Any, w: Any):
    """Fiber arrow over ``x`` with group offset ``w`` in a homogeneous model."""
    return bundle.groupoid.with_offset(x, np.asarray(w, dtype=float))


def load_reports(path: Path):
    """Reports written by ``verify --out``, keyed by check id."""
    return {r["check"]: r for r in json.loads(Path(path).read_text())}
