"""
Base class for the chromatic number and index solvers.
"""
import logging
import time
from abc import ABC, abstractmethod
from typing import Callable, Dict, FrozenSet, Iterable, Optional, Tuple

from models.color_graph import MAX_LABEL
from models.errors import FlavorMismatchError, SizeCapExceededError
from models.expression import Flavor, SpExpression
from models.solve_result import ChromaticResult
from models.solver_config import SolverConfig


class BaseSolver(ABC):
    """Base class for solvers."""

    def __init__(self, config: Optional[SolverConfig] = None):
        """Initialize the solver."""
        self.config = config or SolverConfig()
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def solve(self, subject) -> ChromaticResult:
        """Compute the chromatic value of ``subject`` together with a witness."""
        pass

    def _require_flavor(self, expression: SpExpression, flavor: Flavor):
        if expression.flavor is not flavor:
            raise FlavorMismatchError(
                f"{self.__class__.__name__} needs an {flavor.value} expression, "
                f"got {expression.flavor.value}"
            )

    def _check_cap(self, operation: str, limit: int, actual: int):
        if actual > limit:
            self.logger.error(f"{operation}: size {actual} is above the cap of {limit}")
            raise SizeCapExceededError(operation, limit, actual)

    def _palettes(self, lowest: int) -> Iterable[int]:
        """Palette sizes to try; a single full palette when deepening is off."""
        if self.config.palette_deepening:
            return range(max(lowest, 1), MAX_LABEL + 1)
        return (MAX_LABEL,)

    @staticmethod
    def _prune_dominated(back: Dict, key: Callable) -> Tuple[FrozenSet, Dict]:
        """Drop states whose color graph contains another state's graph with the same key.

        Arcs only accumulate along the tree, so the smaller graph stays oriented
        whenever the larger one does and never needs more labels.
        """
        groups: Dict = {}
        for state in back:
            groups.setdefault(key(state), []).append(state)
        kept: Dict = {}
        for members in groups.values():
            members.sort(key=lambda s: (s.h.labels.bit_count() + s.h.fwd.bit_count(), s.h.labels, s.h.fwd))
            survivors = []
            for state in members:
                labels, fwd = state.h.labels, state.h.fwd
                if any(k.h.labels & ~labels == 0 and k.h.fwd & ~fwd == 0 for k in survivors):
                    continue
                survivors.append(state)
            for state in survivors:
                kept[state] = back[state]
        return frozenset(kept), kept

    @staticmethod
    def _clock() -> float:
        return time.perf_counter()
