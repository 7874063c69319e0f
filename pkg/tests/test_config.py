"""
Tests for configuration management
"""

import json
import logging

import pytest

from pathram.config import ConfigManager
from pathram.exceptions import InvalidConfigurationError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ConfigManager.ENV_OVERRIDES:
        monkeypatch.delenv(name, raising=False)


class TestConfigManager:
    def test_defaults(self):
        config = ConfigManager(load_env_file=False)
        assert config.get("search.node_cap") == 10**8
        assert config.get("search.frontier_cap") == 64
        assert config.get("output.format") == "text"
        assert config.get("missing.key", "fallback") == "fallback"

    def test_defaults_not_shared(self):
        first = ConfigManager(load_env_file=False)
        first.config["search"]["workers"] = 8
        assert ConfigManager(load_env_file=False).get("search.workers") == 1

    def test_file_merge(self, tmp_path):
        path = tmp_path / "pathram.json"
        path.write_text(json.dumps({"search": {"witness_cap": 4}, "output": {"format": "json"}}))
        config = ConfigManager(str(path), load_env_file=False)
        assert config.get("search.witness_cap") == 4
        assert config.get("search.node_cap") == 10**8
        assert config.get("output.format") == "json"

    def test_missing_file_warns(self, tmp_path, caplog):
        with caplog.at_level(logging.WARNING):
            config = ConfigManager(str(tmp_path / "absent.json"), load_env_file=False)
        assert "not found" in caplog.text
        assert config.get("search.workers") == 1

    def test_broken_file_warns(self, tmp_path, caplog):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with caplog.at_level(logging.WARNING):
            ConfigManager(str(path), load_env_file=False)
        assert "Failed to load" in caplog.text

    def test_env_overrides(self, monkeypatch):
        monkeypatch.setenv("PATHRAM_NODE_CAP", "500")
        monkeypatch.setenv("PATHRAM_DEBUG", "yes")
        config = ConfigManager(load_env_file=False)
        assert config.get("search.node_cap") == 500
        assert config.get("logging.debug") is True

    def test_bad_env_value(self, monkeypatch):
        monkeypatch.setenv("PATHRAM_WORKERS", "many")
        with pytest.raises(InvalidConfigurationError, match="PATHRAM_WORKERS"):
            ConfigManager(load_env_file=False)

    def test_save(self, tmp_path):
        config = ConfigManager(load_env_file=False)
        target = tmp_path / "saved.json"
        config.save(str(target))
        assert json.loads(target.read_text())["search"]["split_depth"] == 6

    def test_save_needs_path(self):
        with pytest.raises(InvalidConfigurationError):
            ConfigManager(load_env_file=False).save()
