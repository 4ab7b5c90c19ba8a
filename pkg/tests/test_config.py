"""Tests for experiment configuration files."""

import pytest

from ngdef.config import DEFAULTS, ExperimentConfig
from ngdef.errors import ConfigError


class TestExperimentConfig:
    """Reading, merging and validating configurations."""

    def test_defaults(self):
        config = ExperimentConfig().validate()
        assert config.samples == 1000
        assert config.tol == 1e-9 and config.limit_tol == 1e-6
        assert DEFAULTS["lambda"] == 0.5
        assert "lam" not in DEFAULTS

    def test_from_mapping(self):
        config = ExperimentConfig.from_mapping({"model": "heisenberg", "lambda": 0.25, "limit-tol": 1e-4,
                                                "suites": "cone"})
        assert config.lam == 0.25
        assert config.limit_tol == 1e-4
        assert config.suites == ["cone"]

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown configuration key 'sample'"):
            ExperimentConfig.from_mapping({"sample": 10})

    def test_load_toml_and_json(self, config_file):
        toml_config = ExperimentConfig.load(config_file({"model": "euclidean(2)", "samples": 50}))
        json_config = ExperimentConfig.load(config_file({"model": "euclidean(2)", "samples": 50}, "run.json"))
        assert toml_config == json_config
        assert toml_config.model_spec() == "euclidean(2)"

    def test_unreadable_files(self, tmp_path):
        with pytest.raises(ConfigError):
            ExperimentConfig.load(tmp_path / "missing.toml")
        broken = tmp_path / "broken.toml"
        broken.write_text("model = ")
        with pytest.raises(ConfigError):
            ExperimentConfig.load(broken)
        listing = tmp_path / "list.json"
        listing.write_text("[1, 2]")
        with pytest.raises(ConfigError, match="table of settings"):
            ExperimentConfig.load(listing)

    def test_flags_override_the_file(self):
        config = ExperimentConfig(model="heisenberg", samples=50, suites=["cone"])
        merged = config.merged(samples=10, seed=None, suites=())
        assert merged.samples == 10
        assert merged.seed == 0
        assert merged.suites == ["cone"]
        assert config.merged(suites=("structure",)).suites == ["structure"]

    @pytest.mark.parametrize("overrides", [
        {"samples": 0},
        {"samples": 1.5},
        {"tol": 0.0},
        {"radius": -1.0},
        {"lam": 1.0},
        {"steps": 1},
        {"mu": 0.0},
        {"op": "product"},
        {"seed": True},
        {"suites": "cone"},
    ])
    def test_validation(self, overrides):
        with pytest.raises(ConfigError):
            ExperimentConfig(**overrides).validate()

    def test_model_is_required(self):
        with pytest.raises(ConfigError, match="no model"):
            ExperimentConfig().model_spec()

    def test_schedule_and_sampler(self):
        config = ExperimentConfig(lam=0.25, start=2, steps=5, center=[1.0], radius=0.5, seed=3, samples=7)
        assert list(config.schedule()) == [0.25 ** k for k in range(2, 7)]
        sampler = config.sampler()
        assert (sampler.radius, sampler.seed, sampler.count) == (0.5, 3, 7)
        assert config.model_params() == {"dim": None, "path": None}
