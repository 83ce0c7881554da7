"""
Configuration module for conecalc.

This module provides default configuration parameters and utilities for loading
custom configurations from YAML files.
"""

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Optional, Union, get_args, get_origin
import os
import yaml
import logging

logger = logging.getLogger(__name__)

MAX_R_ENV = "CONECALC_MAX_R"


@dataclass
class SweepConfig:
    """Caps for parameter sweeps and the randomized sample sweep."""

    max_r: int = 10
    max_e: int = 40
    sample_seed: int = 0
    sample_size: int = 200


@dataclass
class ProcessingConfig:
    """Configuration for processing settings."""

    num_workers: int = 1


@dataclass
class OutputConfig:
    """Configuration for report output."""

    json: bool = False
    out: Optional[str] = None
    progress: bool = True


@dataclass
class Config:
    """Main configuration container."""

    sweep: SweepConfig = field(default_factory=SweepConfig)
    processing: ProcessingConfig = field(default_factory=ProcessingConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


def _accepts(annotation: Any, value: Any) -> bool:
    if get_origin(annotation) is Union:
        return any(_accepts(arg, value) for arg in get_args(annotation))
    if annotation is type(None):
        return value is None
    # bool is a subclass of int
    if annotation is int and isinstance(value, bool):
        return False
    return isinstance(value, annotation)


def _apply_env(config: Config) -> None:
    raw = os.environ.get(MAX_R_ENV)
    if raw is None:
        return
    try:
        value = int(raw)
    except ValueError:
        logger.error(f"Ignoring {MAX_R_ENV}={raw!r}: not an integer")
        return
    if value < 3:
        logger.error(f"Ignoring {MAX_R_ENV}={value}: sweeps need max_r >= 3")
        return
    config.sweep.max_r = value
    logger.info(f"Sweep cap max_r={value} taken from {MAX_R_ENV}")


def load_config(config_path: Optional[str] = None) -> Config:
    """
    Load configuration from a YAML file.

    The CONECALC_MAX_R environment variable, when valid, overrides
    sweep.max_r after the file is read.

    Args:
        config_path: Path to the YAML configuration file. If None, returns default config.

    Returns:
        Config object with parameters from the YAML file or defaults
    """
    config = Config()

    if config_path and os.path.exists(config_path):
        try:
            with open(config_path, "r") as f:
                yaml_config = yaml.safe_load(f)

            if yaml_config:
                for section in ("sweep", "processing", "output"):
                    if section not in yaml_config:
                        continue
                    target = getattr(config, section)
                    types = {item.name: item.type for item in fields(target)}
                    for key, value in (yaml_config[section] or {}).items():
                        if key not in types:
                            logger.warning(f"Unknown key {section}.{key} in {config_path}")
                        elif not _accepts(types[key], value):
                            logger.warning(
                                f"Invalid value for {section}.{key}: {value!r} "
                                f"(expected {types[key]}), keeping {getattr(target, key)!r}"
                            )
                        else:
                            setattr(target, key, value)

            logger.info(f"Configuration loaded from {config_path}")
        except Exception as e:
            logger.error(f"Error loading configuration from {config_path}: {e}")
            logger.info("Using default configuration")
            config = Config()
    else:
        if config_path:
            logger.warning(
                f"Configuration file {config_path} not found. Using default configuration."
            )
        else:
            logger.info("No configuration file specified. Using default configuration.")

    _apply_env(config)
    return config


def save_default_config(output_path: str) -> None:
    """
    Save the default configuration to a YAML file.

    Args:
        output_path: Path where to save the config file
    """
    config = Config()
    config_dict = {
        "sweep": asdict(config.sweep),
        "processing": asdict(config.processing),
        "output": asdict(config.output),
    }

    try:
        with open(output_path, "w") as f:
            yaml.dump(config_dict, f, default_flow_style=False, sort_keys=False)
        logger.info(f"Default configuration saved to {output_path}")
    except Exception as e:
        logger.error(f"Error saving default configuration to {output_path}: {e}")
