"""Unit tests for environment settings and config files."""

import pytest

from src.domain.models.errors import ConfigError
from src.domain.models.params import Regime
from src.infrastructure.config import Settings, get_settings, reset_settings
from src.infrastructure.config_file import load_config, parse_config_text


@pytest.fixture
def config_path(tmp_path):
    """Config file for the canonical q = g instance with a sweep axis."""
    path = tmp_path / "run.cfg"
    path.write_text(
        "# canonical instance\n"
        "n = 1e5\n"
        "p = 1e-4\n"
        "\n"
        "r = 2   # threshold\n"
        "regime = q_equals_g\n"
        "alpha_R = 0.8001\n"
        "alpha_B = 0.5001\n"
        "sweep.alpha_R = 0.6, 0.8\n",
        encoding="utf-8",
    )
    return path


@pytest.mark.unit
class TestSettings:
    """Tests for CB_-prefixed environment settings."""

    def test_defaults(self):
        """Defaults apply when no CB_ variable is set."""
        settings = Settings(_env_file=None)
        assert settings.log_level == "WARNING"
        assert settings.audit is False
        assert settings.exact_max_nodes == 20_000

    def test_environment_overrides(self, monkeypatch):
        """CB_THREADS and CB_AUDIT are read from the environment."""
        monkeypatch.setenv("CB_THREADS", "3")
        monkeypatch.setenv("CB_AUDIT", "1")
        reset_settings()
        settings = get_settings()
        assert settings.threads == 3
        assert settings.worker_count() == 3
        assert settings.audit is True

    def test_singleton_until_reset(self, monkeypatch):
        """get_settings caches until reset_settings is called."""
        first = get_settings()
        monkeypatch.setenv("CB_BUDGET", "10")
        assert get_settings() is first
        reset_settings()
        assert get_settings().budget == 10


@pytest.mark.unit
class TestParseConfigText:
    """Tests for the key = value parser."""

    def test_comments_and_blank_lines(self):
        """Comments and blank lines are skipped; last assignment wins."""
        entries = parse_config_text("a = 1\n# comment\n\nb = 2 # trailing\na = 3\n")
        assert entries == {"a": "3", "b": "2"}

    def test_missing_equals(self):
        """A line without '=' names its line number."""
        with pytest.raises(ConfigError, match="line 2"):
            parse_config_text("n = 10\nnonsense\n")


@pytest.mark.unit
class TestLoadConfig:
    """Tests for load_config and RunConfig."""

    def test_reads_file(self, config_path):
        """Scientific notation is accepted for integer keys."""
        config = load_config(config_path)
        assert config.n == 100_000
        assert config.regime is Regime.Q_EQUALS_G
        assert config.sweep == {"alpha_R": [0.6, 0.8]}

    def test_derived_seeds_are_floored(self, config_path):
        """a_S = floor(alpha_S * g) with g = 500, away from integer products."""
        config = load_config(config_path)
        params = config.model_params()
        assert (params.a_r, params.a_b) == (400, 250)
        assert config.seed_rounding() == "floor"
        assert config.scale() == pytest.approx(500.0)

    def test_overrides_then_flags(self, config_path):
        """--set overrides the file (last wins), flags override both."""
        config = load_config(
            config_path,
            overrides=["seed=4", "seed=5", "a_R=10"],
            flags={"a_B": 3, "r": None},
        )
        params = config.model_params()
        assert params.seed == 5
        assert (params.a_r, params.a_b) == (10, 3)
        assert config.seed_rounding() is None

    def test_unknown_key(self, tmp_path):
        """Unknown keys are rejected."""
        path = tmp_path / "bad.cfg"
        path.write_text("n = 100\nbogus = 1\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="bogus"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        """A missing file names its path."""
        missing = tmp_path / "nope.cfg"
        with pytest.raises(ConfigError, match="nope.cfg"):
            load_config(missing)

    def test_non_integer_n(self):
        """n = 1.5e2 is fine, n = 10.5 is not."""
        assert load_config(overrides=["n=1.5e2"]).n == 150
        with pytest.raises(ConfigError):
            load_config(overrides=["n=10.5"])

    def test_sweep_over_seed_rejected(self):
        """The master seed is not a sweep axis."""
        with pytest.raises(ConfigError, match="cannot sweep"):
            load_config(overrides=["sweep.seed=1,2"])

    def test_q_equals_g_needs_n_and_p(self):
        """q = g cannot be computed without n and p."""
        config = load_config(overrides=["regime=q_equals_g", "alpha_R=0.8", "alpha_B=0.5"])
        with pytest.raises(ConfigError, match="needs n and p"):
            config.regime_spec()

    def test_to_dict_round_trip_keys(self, config_path):
        """to_dict uses config-file spelling, sweep axes included."""
        data = load_config(config_path).to_dict()
        assert data["alpha_R"] == 0.8001
        assert data["regime"] == "q_equals_g"
        assert data["sweep.alpha_R"] == [0.6, 0.8]
