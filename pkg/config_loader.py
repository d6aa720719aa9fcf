"""
Configuration loader for the series-parallel coloring tool.
Reads defaults from environment variables and an optional YAML file.
"""
import os
from pathlib import Path
from typing import Any, Dict, Optional

# Try to import yaml, make it optional
try:
    import yaml
    YAML_AVAILABLE = True
except ImportError:
    YAML_AVAILABLE = False

from models.errors import ConfigurationError
from models.solver_config import BenchConfig, LoggingConfig, OutputConfig, SolverConfig

SECTIONS = ('solver', 'bench', 'output', 'logging')


def _env_flag(name: str) -> Optional[bool]:
    value = os.getenv(name)
    if value is None:
        return None
    return value.strip().lower() in ('1', 'true', 'on', 'yes')


class ConfigLoader:
    """Builds the configuration dataclasses.

    Environment variables override the built-in defaults and the YAML file
    overrides both; command line flags are applied by the application on top.
    """

    def __init__(self, config_file: Optional[str] = None):
        """Initialize configuration loader."""
        self.config_file = config_file
        self._document: Optional[Dict[str, Any]] = None

    def load_document(self) -> Dict[str, Any]:
        """Parsed YAML file, or an empty mapping when no file was given."""
        if self._document is not None:
            return self._document
        if not self.config_file:
            self._document = {}
            return self._document
        if not Path(self.config_file).exists():
            raise ConfigurationError(f"Configuration file not found: {self.config_file}")
        if not YAML_AVAILABLE:
            raise ConfigurationError("YAML module not available. Install with: pip install pyyaml")

        with open(self.config_file, 'r', encoding='utf-8') as f:
            document = yaml.safe_load(f) or {}
        if not isinstance(document, dict):
            raise ConfigurationError(f"Configuration root must be a mapping: {self.config_file}")
        unknown = sorted(set(document) - set(SECTIONS))
        if unknown:
            raise ConfigurationError(f"Unknown configuration sections: {', '.join(unknown)}")
        self._document = document
        return document

    def _section(self, name: str) -> Dict[str, Any]:
        section = self.load_document().get(name) or {}
        if not isinstance(section, dict):
            raise ConfigurationError(f"Section '{name}' must be a mapping")
        return section

    def load_solver_config(self) -> SolverConfig:
        values: Dict[str, Any] = {}
        prune = _env_flag('SPCOLOR_PRUNE')
        if prune is not None:
            values['prune'] = prune
        values.update(self._section('solver'))
        try:
            return SolverConfig(**values)
        except TypeError as e:
            raise ConfigurationError(f"Invalid solver configuration: {e}")

    def load_bench_config(self) -> BenchConfig:
        try:
            return BenchConfig(**self._section('bench'))
        except TypeError as e:
            raise ConfigurationError(f"Invalid bench configuration: {e}")

    def load_output_config(self) -> OutputConfig:
        values: Dict[str, Any] = {}
        verbose = _env_flag('VERBOSE')
        if verbose is not None:
            values['verbose'] = verbose
        seed = os.getenv('SPCOLOR_SEED')
        if seed is not None:
            try:
                values['seed'] = int(seed)
            except ValueError:
                raise ConfigurationError(f"SPCOLOR_SEED must be an integer, got {seed!r}")
        values.update(self._section('output'))
        try:
            return OutputConfig(**values)
        except TypeError as e:
            raise ConfigurationError(f"Invalid output configuration: {e}")

    def load_logging_config(self) -> LoggingConfig:
        values: Dict[str, Any] = {}
        if os.getenv('LOG_LEVEL'):
            values['level'] = os.getenv('LOG_LEVEL')
        values.update(self._section('logging'))
        try:
            return LoggingConfig(**values)
        except TypeError as e:
            raise ConfigurationError(f"Invalid logging configuration: {e}")
