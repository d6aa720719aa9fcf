"""
Configuration models for the solvers, the benchmark and console output.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from models.errors import ConfigurationError


class OutputFormat(Enum):
    """Supported output formats."""
    TEXT = "text"
    JSON = "json"
    DOT = "dot"


BENCH_GENERATORS = ("esp_path", "msp_chain")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class SolverConfig:
    """Switches and size caps shared by every solver."""
    prune: bool = False
    early_orientation_pruning: bool = True
    palette_deepening: bool = True
    symmetry_reduction: bool = True
    strict_names: bool = False
    oracle_vertex_cap: int = 30
    isomorphism_cap: int = 200
    undirected_cap: int = 20
    cnf_variable_cap: int = 24

    def __post_init__(self):
        """Validate caps."""
        for name in ('oracle_vertex_cap', 'isomorphism_cap', 'undirected_cap', 'cnf_variable_cap'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")


@dataclass
class BenchConfig:
    """Linear scaling benchmark settings."""
    generator: str = "esp_path"
    sizes: List[int] = field(default_factory=lambda: [1000, 10000, 100000])

    def __post_init__(self):
        """Validate benchmark settings."""
        if self.generator not in BENCH_GENERATORS:
            raise ConfigurationError(
                f"Unknown bench generator {self.generator!r}; expected one of {', '.join(BENCH_GENERATORS)}"
            )
        if any(not isinstance(size, int) or size < 2 for size in self.sizes):
            raise ConfigurationError("Bench sizes must be integers of at least 2")
        if list(self.sizes) != sorted(self.sizes):
            raise ConfigurationError("Bench sizes must be ascending")


@dataclass
class OutputConfig:
    """How results are printed."""
    format: OutputFormat = OutputFormat.TEXT
    witness: bool = False
    seed: int = 0
    verbose: bool = False

    def __post_init__(self):
        """Accept plain strings for the format."""
        if not isinstance(self.format, OutputFormat):
            try:
                self.format = OutputFormat(str(self.format).lower())
            except ValueError:
                raise ConfigurationError(f"Unknown output format: {self.format!r}")


@dataclass
class LoggingConfig:
    """Logging level and optional log file."""
    level: str = "WARNING"
    file: Optional[str] = None

    def __post_init__(self):
        """Validate log level."""
        self.level = str(self.level).upper()
        if self.level not in LOG_LEVELS:
            raise ConfigurationError(f"Unknown log level: {self.level}")
