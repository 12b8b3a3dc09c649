"""Scenario configs, the report runner and the ``topclosure`` command."""
from .config import ConfigError, ConfigIssue, ScenarioConfig, load_config, parse_config
from .runner import SCHEMA_VERSION, run, to_json, to_table

__all__ = [
    "ConfigError",
    "ConfigIssue",
    "SCHEMA_VERSION",
    "ScenarioConfig",
    "load_config",
    "parse_config",
    "run",
    "to_json",
    "to_table",
]
