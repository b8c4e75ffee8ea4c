"""
Configuration management for the secant-defect engine.

This module loads config.yaml, merges it over the built-in defaults and
turns the engine section into a validated ``EngineSettings`` value.
"""

import copy
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from exceptions import ConfigError
from utils import get_project_root

logger = logging.getLogger(__name__)

# Default configuration values
DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "engine": {
        "field": "modp",
        "primes": 3,
        "trials": 3,
        "prime_bits": 62,
        "rational_window": 10_000,
        "rational_height_bits": 1 << 16,
        "sample_retries": 16,
        "hyperplane_retries": 32,
        "vertex_max_frames": 12,
        "section_hyperplanes": 5,
    },
    "curves": {
        "max_degree": 40,
        "strict": False,
    },
    "output": {
        "json_indent": 2,
        "table_format": "simple",
    },
    "logging": {
        "level": "WARNING",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        "file": None,
    },
}

CONFIG_FILE = "config.yaml"

FIELD_TAGS = ("modp", "rational")


def default_config_path() -> Path:
    return get_project_root() / CONFIG_FILE


def merge_config(overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merge a user configuration over the defaults, section by section.

    Unknown top-level sections are kept as given so callers can carry
    their own settings.
    """
    merged = copy.deepcopy(DEFAULT_CONFIG)
    for section, values in overrides.items():
        if section in merged and values is None:
            continue
        if section in merged and isinstance(values, dict):
            merged[section].update(values)
        elif section in merged:
            raise ConfigError(
                f"Config section '{section}' must be a mapping",
                details={"section": section, "type": type(values).__name__}
            )
        else:
            merged[section] = values
    return merged


def load_config(config_path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load configuration from a YAML file and merge it over the defaults.

    Args:
        config_path: Path to the YAML file; the project config.yaml when omitted

    Returns:
        Configuration dictionary with every default section present

    Raises:
        ConfigError: If the config file cannot be loaded or is invalid
    """
    config_path = Path(config_path) if config_path else default_config_path()
    if not config_path.exists():
        raise ConfigError(
            f"Config file not found: {config_path}",
            details={"config_path": str(config_path)}
        )

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as exc:
        raise ConfigError(
            f"Invalid YAML in config file: {config_path}",
            details={"config_path": str(config_path), "yaml_error": str(exc)},
            original_error=exc
        ) from exc
    except (OSError, PermissionError) as exc:
        raise ConfigError(
            f"Unable to read config file: {config_path}",
            details={"config_path": str(config_path)},
            original_error=exc
        ) from exc

    if config is None:
        raise ConfigError(
            f"Config file is empty: {config_path}",
            details={"config_path": str(config_path)}
        )

    if not isinstance(config, dict):
        raise ConfigError(
            f"Config file must contain a dictionary, got {type(config).__name__}",
            details={"config_path": str(config_path), "config_type": type(config).__name__}
        )

    merged = merge_config(config)
    logger.info("Configuration loaded from %s", config_path)
    return merged


@dataclass(frozen=True)
class EngineSettings:
    """Validated knobs for the defect engine and the curve module."""

    field: str = "modp"
    primes: int = 3
    trials: int = 3
    prime_bits: int = 62
    rational_window: int = 10_000
    rational_height_bits: int = 1 << 16
    sample_retries: int = 16
    hyperplane_retries: int = 32
    vertex_max_frames: int = 12
    section_hyperplanes: int = 5
    max_curve_degree: int = 40
    strict_curves: bool = False

    def with_overrides(self, **changes: Any) -> "EngineSettings":
        """Copy with the non-None ``changes`` applied and validated."""
        applied = {k: v for k, v in changes.items() if v is not None}
        settings = replace(self, **applied)
        settings.validate()
        return settings

    def validate(self) -> None:
        """
        Raises:
            ConfigError: If a value is out of range
        """
        if self.field not in FIELD_TAGS:
            raise ConfigError(
                f"Unknown field '{self.field}'",
                details={"field": self.field, "allowed": list(FIELD_TAGS)}
            )
        for name in ("primes", "trials", "rational_window", "rational_height_bits", "sample_retries",
                     "hyperplane_retries", "vertex_max_frames", "section_hyperplanes", "max_curve_degree"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(
                    f"Setting '{name}' must be a positive integer",
                    details={"setting": name, "value": value}
                )
        if not 8 <= self.prime_bits <= 63:
            raise ConfigError(
                "Setting 'prime_bits' must lie in [8, 63]",
                details={"setting": "prime_bits", "value": self.prime_bits}
            )
        if self.vertex_max_frames < 2:
            raise ConfigError(
                "Setting 'vertex_max_frames' must be at least 2",
                details={"setting": "vertex_max_frames", "value": self.vertex_max_frames}
            )


def get_engine_settings(config: Optional[Dict[str, Any]] = None) -> EngineSettings:
    """
    Build ``EngineSettings`` from a merged configuration dictionary.

    Raises:
        ConfigError: If a value has the wrong type or range
    """
    config = merge_config(config or {})
    engine = config["engine"]
    curves = config["curves"]
    known = {f for f in EngineSettings.__dataclass_fields__}
    unknown = sorted(set(engine) - known)
    if unknown:
        logger.warning("Ignoring unknown engine settings: %s", ", ".join(unknown))
    try:
        settings = EngineSettings(
            **{k: v for k, v in engine.items() if k in known},
            max_curve_degree=curves.get("max_degree", 40),
            strict_curves=bool(curves.get("strict", False)),
        )
    except TypeError as exc:
        raise ConfigError("Invalid engine settings", details={"error": str(exc)}, original_error=exc) from exc
    settings.validate()
    return settings
