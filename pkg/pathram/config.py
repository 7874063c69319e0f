"""
Configuration management for pathram
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .exceptions import InvalidConfigurationError

logger = logging.getLogger(__name__)


class ConfigManager:
    """Manages search, periodicity and output settings"""

    DEFAULT_CONFIG = {
        "search": {
            "node_cap": 10**8,
            "witness_cap": 16,
            "frontier_cap": 64,
            "workers": 1,
            "split_depth": 6,
        },
        "periodicity": {
            "max_extensions": 10**6,
        },
        "output": {
            "format": "text",
        },
        "logging": {
            "debug": False,
        },
    }

    # environment variable -> (section, key, parser)
    ENV_OVERRIDES = {
        "PATHRAM_NODE_CAP": ("search", "node_cap", int),
        "PATHRAM_WITNESS_CAP": ("search", "witness_cap", int),
        "PATHRAM_FRONTIER_CAP": ("search", "frontier_cap", int),
        "PATHRAM_WORKERS": ("search", "workers", int),
        "PATHRAM_MAX_EXTENSIONS": ("periodicity", "max_extensions", int),
        "PATHRAM_DEBUG": ("logging", "debug", lambda raw: raw.strip().lower() in ("1", "true", "yes", "on")),
    }

    def __init__(self, config_path: Optional[str] = None, load_env_file: bool = True) -> None:
        """
        Initialize configuration manager

        Args:
            config_path: Path to a JSON configuration file
            load_env_file: Read a .env file into the environment first
        """
        self.config_path = config_path
        if load_env_file:
            load_dotenv()
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file and environment"""
        config = copy.deepcopy(self.DEFAULT_CONFIG)

        if self.config_path:
            file_path = Path(self.config_path)
            if file_path.exists():
                try:
                    with open(file_path) as f:
                        file_config = json.load(f)
                    self._deep_update(config, file_config)
                except (OSError, ValueError) as e:
                    logger.warning(f"Failed to load config file {self.config_path}: {e}")
            else:
                logger.warning(f"Config file {self.config_path} not found, using defaults")

        self._load_env_overrides(config)
        return config

    def _deep_update(self, base: Dict[str, Any], updates: Dict[str, Any]) -> None:
        """Deep update dictionary"""
        for key, value in updates.items():
            if key in base and isinstance(base[key], dict) and isinstance(value, dict):
                self._deep_update(base[key], value)
            else:
                base[key] = value

    def _load_env_overrides(self, config: Dict[str, Any]) -> None:
        """Apply PATHRAM_* environment variables"""
        for name, (section, key, parse) in self.ENV_OVERRIDES.items():
            raw = os.getenv(name)
            if raw is None or raw == "":
                continue
            try:
                config[section][key] = parse(raw)
            except ValueError:
                raise InvalidConfigurationError(f"{name}={raw!r} is not a valid {key}")

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get configuration value using dot notation

        Args:
            key_path: Dot-separated path to config value (e.g., "search.node_cap")
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        keys = key_path.split(".")
        value = self.config

        try:
            for key in keys:
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def save(self, output_path: Optional[str] = None) -> None:
        """
        Save current configuration to file

        Args:
            output_path: Path to save config (defaults to original config_path)
        """
        save_path = output_path or self.config_path
        if not save_path:
            raise InvalidConfigurationError("No output path specified")

        with open(save_path, "w") as f:
            json.dump(self.config, f, indent=2)
