"""
Error types raised by the series-parallel coloring toolkit.

Every error derives from ``SpColoringError`` which is itself a ``ValueError``,
so callers that only guard against bad values keep working.
"""
from typing import Optional


class SpColoringError(ValueError):
    """Base class for all toolkit errors."""


class InvalidDigraphError(SpColoringError):
    """Digraph violates the oriented multidigraph invariants."""


class ExpressionSyntaxError(SpColoringError):
    """Expression text does not follow the grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class FlavorMismatchError(SpColoringError):
    """Leaf kind does not match the requested expression flavor."""


class DuplicateVertexError(SpColoringError):
    """A vertex name occurs twice in an msp expression."""


class NameConsistencyError(SpColoringError):
    """Identified esp endpoints carry different names (strict evaluation)."""


class SizeCapExceededError(SpColoringError):
    """Input is larger than an exhaustive routine accepts."""

    def __init__(self, operation: str, limit: int, actual: int):
        super().__init__(f"{operation}: size {actual} exceeds the cap of {limit}")
        self.operation = operation
        self.limit = limit
        self.actual = actual


class PartialColoringError(SpColoringError):
    """Coloring does not cover every vertex or arc of the graph."""

    def __init__(self, message: str, missing: Optional[object] = None):
        super().__init__(message)
        self.missing = missing


class ColorRangeError(SpColoringError):
    """A color lies outside the admissible range."""


class NotAnArcError(SpColoringError):
    """Requested color pair is not an arc of the color graph."""


class GeneratorParameterError(SpColoringError):
    """Generator called with parameters outside their range."""


class FixtureNotFoundError(SpColoringError):
    """Named fixture is not shipped with the toolkit."""


class ConfigurationError(SpColoringError):
    """Configuration value is missing or invalid."""


class UsageError(SpColoringError):
    """Command line flags are inconsistent."""
