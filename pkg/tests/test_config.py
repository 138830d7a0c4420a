"""Tests for config module."""

import json
import os
from pathlib import Path

import pytest

from convexhd.config import DEFAULTS, Config, coerce


class TestConfig:
    """Test suite for Config class."""

    def test_init_creates_config_dir(self, isolated_home):
        """Test that config directory is created on init."""
        config = Config()

        assert config.config_dir == isolated_home / ".convexhd"
        assert config.config_dir.exists()

    def test_defaults_when_nothing_is_stored(self, isolated_home):
        config = Config()

        assert config.all() == DEFAULTS

    def test_set_and_get_round_trip(self, isolated_home):
        """Test that stored values are read back with the right type."""
        config = Config()
        config.set("search_depth", "5")
        config.set("mirrored_rounding", "yes")

        fresh = Config()
        assert fresh.get("search_depth") == 5
        assert fresh.get("mirrored_rounding") is True

    def test_env_overrides_file(self, isolated_home, monkeypatch):
        """Test that CONVEXHD_<KEY> beats the config file."""
        config = Config()
        config.set("dart_bound", 50)
        monkeypatch.setenv("CONVEXHD_DART_BOUND", "900")

        assert config.get("dart_bound") == 900

    def test_set_unknown_key(self, isolated_home):
        config = Config()

        with pytest.raises(KeyError):
            config.set("api_key", "x")

    def test_set_rejects_bad_values(self, isolated_home):
        config = Config()

        with pytest.raises(ValueError):
            config.set("remove_bigon_points", "maybe")
        with pytest.raises(ValueError):
            config.set("arc_faces", -1)

    def test_unknown_key_falls_back_to_default(self, isolated_home):
        assert Config().get("nothing", "fallback") == "fallback"

    def test_config_file_permissions(self, isolated_home):
        """Test that the config file is written owner-only."""
        config = Config()
        config.set("arc_faces", 3)

        if os.name == "posix":
            assert (config.config_file.stat().st_mode & 0o777) == 0o600


class TestCoerce:
    def test_bool_words(self):
        assert coerce("mirrored_rounding", "On") is True
        assert coerce("mirrored_rounding", "0") is False

    def test_integer(self):
        assert coerce("search_depth", "4") == 4

    def test_not_an_integer(self):
        with pytest.raises(ValueError):
            coerce("search_depth", "deep")


class TestHistory:
    """Test suite for verdict history."""

    def test_empty_history(self, isolated_home):
        assert Config().get_history() == []

    def test_newest_first(self, isolated_home):
        config = Config()
        config.save_to_history("check", "a.diag", "convex")
        config.save_to_history("check", "b.diag", "not convex", "α: NOT_CERTIFIED")

        history = config.get_history()
        assert [h["target"] for h in history] == ["b.diag", "a.diag"]
        assert history[0]["detail"] == "α: NOT_CERTIFIED"

    def test_history_is_capped(self, isolated_home):
        """Test that only the last 100 entries are kept."""
        config = Config()
        for i in range(105):
            config.save_to_history("check", f"{i}.diag", "convex")

        lines = Path(config.history_file).read_text().splitlines()
        assert len(lines) == 100
        assert json.loads(lines[0])["target"] == "5.diag"

    def test_corrupt_lines_are_skipped(self, isolated_home):
        config = Config()
        config.save_to_history("check", "a.diag", "convex")
        with open(config.history_file, "a") as f:
            f.write("{not json\n")

        assert len(config.get_history()) == 1

    def test_clear_history(self, isolated_home):
        config = Config()
        config.save_to_history("check", "a.diag", "convex")
        config.clear_history()

        assert config.get_history() == []
