"""Bundled solver, encoder and synthesis defaults."""

from pathlib import Path

DEFAULT_CONFIG = "default.yaml"


def get_config_path() -> Path:
    return Path(__file__).parent


def default_config_file() -> Path:
    return get_config_path() / DEFAULT_CONFIG
