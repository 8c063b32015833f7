"""Unit tests for configuration management."""

from pathlib import Path

import pytest

from wardChain.core.config import load_grid_spec, load_run_config, parse_run_config
from wardChain.core.config_schema import AppConfig, CompactnessMode, GridSpec, LogLevel
from wardChain.core.exceptions import ConfigurationError

RUN_FILE = """
[synthetic]
rows = 4
cols = 4
num_districts = 2

[validity]
pop_tolerance_wards = 1.5
compactness_mode = "L1"
compactness_budget = 1.1

[chain]
steps = 100
rng_seed = 7
"""


def _write(tmp_path: Path, text: str, name: str = "run.toml") -> Path:
    path = tmp_path / name
    path.write_text(text)
    return path


@pytest.mark.unit
class TestRunConfig:
    """Test loading run files."""

    def test_load_run_file(self, tmp_path):
        """Test values, defaults and the label taken from the file name."""
        config = load_run_config(_write(tmp_path, RUN_FILE, "perimeter-yes.toml"))

        assert config.label == "perimeter-yes"
        assert config.synthetic == GridSpec(rows=4, cols=4, num_districts=2)
        assert config.validity.compactness_mode is CompactnessMode.L1
        assert config.validity.enforce_counties is True
        assert config.chain.steps == 100
        assert config.chain.rng_seed == 7
        assert config.chain.lazy is False
        assert config.output.trace is None

    def test_explicit_label_kept(self, tmp_path):
        """Test a label in the file wins over the file name."""
        config = load_run_config(_write(tmp_path, 'label = "row one"\n' + RUN_FILE))
        assert config.label == "row one"

    def test_seed_override(self, tmp_path):
        """Test --seed replaces chain.rng_seed."""
        assert load_run_config(_write(tmp_path, RUN_FILE), seed_override=99).chain.rng_seed == 99

    def test_graph_paths_anchor_to_run_file(self, tmp_path):
        """Test relative table paths resolve against the run file's directory."""
        text = '[graph]\nnodes = "n.csv"\nedges = "/abs/e.csv"\nnum_districts = 2\n\n[chain]\nsteps = 1\n'
        config = load_run_config(_write(tmp_path, text))

        assert config.graph.nodes == tmp_path / "n.csv"
        assert config.graph.edges == Path("/abs/e.csv")

    @pytest.mark.parametrize(
        "text,key",
        [
            (RUN_FILE.replace("steps = 100", "steps = 0"), "chain.steps"),
            (RUN_FILE.replace("pop_tolerance_wards = 1.5", "pop_tolerance_wards = -1"), "validity.pop_tolerance_wards"),
            (RUN_FILE.replace('"L1"', '"l3"'), "validity.compactness_mode"),
            ("unknown = 1\n" + RUN_FILE, "unknown"),
        ],
    )
    def test_invalid_values(self, tmp_path, text, key):
        """Test out-of-range and unknown keys name the offending key."""
        with pytest.raises(ConfigurationError) as exc_info:
            load_run_config(_write(tmp_path, text))
        assert exc_info.value.details["config_key"] == key

    def test_exactly_one_input(self):
        """Test [graph] and [synthetic] are mutually exclusive and one is required."""
        with pytest.raises(ConfigurationError, match="exactly one"):
            parse_run_config({"chain": {"steps": 1}})

    def test_missing_file(self, tmp_path):
        """Test a missing run file."""
        with pytest.raises(ConfigurationError, match="not found"):
            load_run_config(tmp_path / "absent.toml")

    def test_bad_toml(self, tmp_path):
        """Test a file that is not TOML."""
        with pytest.raises(ConfigurationError, match="not valid TOML"):
            load_run_config(_write(tmp_path, "[chain\nsteps = 1"))


@pytest.mark.unit
class TestGridSpec:
    """Test grid specifications."""

    def test_load_from_run_file(self, tmp_path):
        """Test the [synthetic] table of a run file."""
        assert load_grid_spec(_write(tmp_path, RUN_FILE)).rows == 4

    def test_requires_synthetic_table(self, tmp_path):
        """Test a file without [synthetic] is rejected."""
        with pytest.raises(ConfigurationError, match="no \\[synthetic\\] table"):
            load_grid_spec(_write(tmp_path, "[chain]\nsteps = 1\n"))

    def test_table_shape(self, tmp_path):
        """Test tables must match the grid size."""
        text = "[synthetic]\nrows = 2\ncols = 2\nnum_districts = 2\npopulation = [[1.0, 1.0]]\n"
        with pytest.raises(ConfigurationError, match="2x2 table"):
            load_grid_spec(_write(tmp_path, text))

    @pytest.mark.parametrize(
        "values",
        [
            dict(rows=1, cols=2, num_districts=3),
            dict(rows=2, cols=2, num_districts=2, rep=[[1.0, 1.0], [1.0, 1.0]]),
            dict(rows=2, cols=2, num_districts=2, seed="explicit"),
            dict(rows=2, cols=2, num_districts=2, frozen_districts=[2]),
        ],
    )
    def test_rejects_inconsistent_specs(self, values):
        """Test infeasible or incomplete specs."""
        with pytest.raises(ValueError):
            GridSpec(**values)


@pytest.mark.unit
class TestAppConfig:
    """Test process-wide settings."""

    def test_defaults(self):
        """Test the default settings."""
        config = AppConfig()
        assert config.logging.level is LogLevel.INFO
        assert config.workers == 1
        assert config.histogram_bins == 50

    def test_environment(self, monkeypatch):
        """Test WARDCHAIN_* variables, nested ones included."""
        monkeypatch.setenv("WARDCHAIN_WORKERS", "4")
        monkeypatch.setenv("WARDCHAIN_LOGGING__LEVEL", "debug")
        monkeypatch.setenv("WARDCHAIN_ENUMERATION_LIMIT", "1000")

        config = AppConfig()

        assert config.workers == 4
        assert config.logging.level is LogLevel.DEBUG
        assert config.enumeration_limit == 1000
