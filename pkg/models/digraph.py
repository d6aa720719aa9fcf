"""
Oriented multidigraph value type and the two coloring records.
"""
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Hashable, List, Mapping, Tuple

import networkx as nx

from models.errors import ColorRangeError, InvalidDigraphError

Vertex = Hashable
Arc = Tuple[Vertex, Vertex]


@dataclass(frozen=True)
class OrientedDigraph:
    """Ordered vertices plus an ordered arc multiset; arc id = position in ``arcs``.

    Loops and opposite arcs are rejected, parallel arcs are allowed.
    """
    vertices: Tuple[Vertex, ...]
    arcs: Tuple[Arc, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'vertices', tuple(self.vertices))
        object.__setattr__(self, 'arcs', tuple((tail, head) for tail, head in self.arcs))

        declared = set()
        for vertex in self.vertices:
            if vertex in declared:
                raise InvalidDigraphError(f"Duplicate vertex id: {vertex!r}")
            declared.add(vertex)

        pairs = set()
        for arc_id, (tail, head) in enumerate(self.arcs):
            if tail not in declared or head not in declared:
                raise InvalidDigraphError(f"Arc {arc_id} ({tail!r}, {head!r}) has an undeclared endpoint")
            if tail == head:
                raise InvalidDigraphError(f"Arc {arc_id} is a loop at {tail!r}")
            if (head, tail) in pairs:
                raise InvalidDigraphError(f"Arc {arc_id} ({tail!r}, {head!r}) has an opposite arc")
            pairs.add((tail, head))

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @cached_property
    def vertex_index(self) -> Dict[Vertex, int]:
        """Position of every vertex id in ``vertices``."""
        return {vertex: index for index, vertex in enumerate(self.vertices)}

    @cached_property
    def _out_arcs(self) -> Dict[Vertex, List[int]]:
        table = {vertex: [] for vertex in self.vertices}
        for arc_id, (tail, _) in enumerate(self.arcs):
            table[tail].append(arc_id)
        return table

    @cached_property
    def _in_arcs(self) -> Dict[Vertex, List[int]]:
        table = {vertex: [] for vertex in self.vertices}
        for arc_id, (_, head) in enumerate(self.arcs):
            table[head].append(arc_id)
        return table

    def out_arcs(self, vertex: Vertex) -> List[int]:
        return self._out_arcs[vertex]

    def in_arcs(self, vertex: Vertex) -> List[int]:
        return self._in_arcs[vertex]

    def outdegree(self, vertex: Vertex) -> int:
        return len(self._out_arcs[vertex])

    def indegree(self, vertex: Vertex) -> int:
        return len(self._in_arcs[vertex])

    def out_neighbors(self, vertex: Vertex) -> List[Vertex]:
        """Distinct heads of the arcs leaving ``vertex``, in arc order."""
        return list(dict.fromkeys(self.arcs[a][1] for a in self._out_arcs[vertex]))

    def in_neighbors(self, vertex: Vertex) -> List[Vertex]:
        return list(dict.fromkeys(self.arcs[a][0] for a in self._in_arcs[vertex]))

    def sources(self) -> Tuple[Vertex, ...]:
        """Vertices of indegree 0, in vertex order."""
        return tuple(v for v in self.vertices if not self._in_arcs[v])

    def sinks(self) -> Tuple[Vertex, ...]:
        """Vertices of outdegree 0, in vertex order."""
        return tuple(v for v in self.vertices if not self._out_arcs[v])

    def arc_multiplicities(self) -> Counter:
        return Counter(self.arcs)

    def line_digraph(self) -> 'OrientedDigraph':
        """One vertex per arc id; arc (a, b) whenever head(a) = tail(b)."""
        line_arcs = []
        for arc_id, (_, head) in enumerate(self.arcs):
            for next_id in self._out_arcs[head]:
                line_arcs.append((arc_id, next_id))
        return OrientedDigraph(tuple(range(len(self.arcs))), tuple(line_arcs))

    def underlying_graph(self) -> nx.Graph:
        """Undirected simple graph obtained by forgetting directions."""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.arcs)
        return graph

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.arcs)
        return graph

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_networkx())

    def relabeled(self, mapping: Mapping[Vertex, Vertex]) -> 'OrientedDigraph':
        """Copy with every vertex id replaced through ``mapping``; order is kept."""
        return OrientedDigraph(
            tuple(mapping[v] for v in self.vertices),
            tuple((mapping[t], mapping[h]) for t, h in self.arcs),
        )

    def __str__(self) -> str:
        return f"OrientedDigraph({self.vertex_count} vertices, {self.arc_count} arcs)"


def _check_colors(colors: Mapping, r: int, kind: str):
    if r < 1:
        raise ColorRangeError(f"{kind} needs a positive color count, got {r}")
    for key, color in colors.items():
        if not isinstance(color, int) or isinstance(color, bool) or not 1 <= color <= r:
            raise ColorRangeError(f"{kind}: color {color!r} of {key!r} is outside 1..{r}")


@dataclass(frozen=True)
class VertexColoring:
    """Vertex id to color in 1..r."""
    colors: Mapping[Vertex, int]
    r: int

    def __post_init__(self):
        object.__setattr__(self, 'colors', dict(self.colors))
        _check_colors(self.colors, self.r, "VertexColoring")

    def __getitem__(self, vertex: Vertex) -> int:
        return self.colors[vertex]

    @property
    def used_colors(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.colors.values())))


@dataclass(frozen=True)
class ArcColoring:
    """Arc id to color in 1..r."""
    colors: Mapping[int, int]
    r: int

    def __post_init__(self):
        object.__setattr__(self, 'colors', dict(self.colors))
        _check_colors(self.colors, self.r, "ArcColoring")

    def __getitem__(self, arc_id: int) -> int:
        return self.colors[arc_id]

    @property
    def used_colors(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.colors.values())))

    def as_vertex_coloring(self) -> VertexColoring:
        """Same mapping read as a coloring of the line digraph."""
        return VertexColoring(self.colors, self.r)

