"""
Result records returned by the solvers, validators and the benchmark.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

from models.color_graph import ColorGraph
from models.digraph import ArcColoring, VertexColoring


class Problem(Enum):
    """Which chromatic parameter was computed."""
    OCN = "ocn"
    OCI = "oci"


class Method(Enum):
    """How the value was obtained."""
    DYNAMIC_PROGRAM = "dp"
    ORACLE = "oracle"


@dataclass
class ValidationReport:
    """Outcome of a coloring check; truthy when the coloring is valid."""
    valid: bool
    violation: Optional[Tuple[Any, ...]] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.valid

    @classmethod
    def ok(cls) -> 'ValidationReport':
        return cls(True)


@dataclass
class ChromaticResult:
    """Value of chi_o or chi'_o plus the witness that realizes it."""
    problem: Problem
    method: Method
    value: int
    coloring: Optional[Union[VertexColoring, ArcColoring]] = None
    color_graph: Optional[ColorGraph] = None
    vertex_count: int = 0
    arc_count: int = 0
    palette: Optional[int] = None
    elapsed_seconds: float = 0.0

    def as_pair(self) -> Tuple[int, Optional[Union[VertexColoring, ArcColoring]]]:
        return self.value, self.coloring

    def to_dict(self, include_witness: bool = True) -> Dict[str, Any]:
        """Deterministic dictionary; timing is not included."""
        data: Dict[str, Any] = {
            'problem': self.problem.value,
            'method': self.method.value,
            'value': self.value,
            'vertices': self.vertex_count,
            'arcs': self.arc_count,
        }
        if include_witness and self.coloring is not None:
            data['witness'] = {str(key): color for key, color in self.coloring.colors.items()}
        if include_witness and self.color_graph is not None:
            data['color_graph'] = {
                'labels': list(self.color_graph.label_set()),
                'arcs': [list(arc) for arc in self.color_graph.arc_list()],
            }
        return data


@dataclass
class BenchRow:
    """One line of the linear-scaling table."""
    size: int
    seconds: float
    value: int
    ratio: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {'size': self.size, 'seconds': self.seconds, 'value': self.value, 'ratio': self.ratio}


@dataclass
class BenchTable:
    """Rows of a benchmark run in ascending size order."""
    generator: str
    rows: List[BenchRow] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.rows

    @property
    def max_ratio(self) -> Optional[float]:
        ratios = [row.ratio for row in self.rows if row.ratio is not None]
        return max(ratios) if ratios else None
