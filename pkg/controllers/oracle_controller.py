"""
Exact oriented coloring by backtracking, for small instances.
"""
from typing import Dict, List, Optional, Tuple

from controllers.base_controller import BaseSolver
from controllers.structure_controller import StructureAnalyzer
from models.digraph import ArcColoring, OrientedDigraph, VertexColoring
from models.solve_result import ChromaticResult, Method, Problem
from models.solver_config import SolverConfig


class OracleSolver(BaseSolver):
    """Ground-truth oriented chromatic number and index.

    The search keeps an r x r matrix counting arcs between color classes. Placing
    an arc from class a to class b is refused when an arc from b to a already
    exists, which enforces both oriented coloring conditions incrementally.
    Colors are tried up to one more than the largest color in use, so the first
    placed vertex always gets color 1.
    """

    def __init__(self, config: Optional[SolverConfig] = None,
                 analyzer: Optional[StructureAnalyzer] = None):
        super().__init__(config)
        self.analyzer = analyzer or StructureAnalyzer(self.config)

    def solve(self, subject: OrientedDigraph) -> ChromaticResult:
        start = self._clock()
        value, coloring = self.chi_o_exact(subject)
        return ChromaticResult(
            Problem.OCN, Method.ORACLE, value, coloring,
            vertex_count=subject.vertex_count, arc_count=subject.arc_count,
            elapsed_seconds=self._clock() - start,
        )

    def solve_index(self, graph: OrientedDigraph) -> ChromaticResult:
        start = self._clock()
        value, coloring = self.chi_o_index_exact(graph)
        return ChromaticResult(
            Problem.OCI, Method.ORACLE, value, coloring,
            vertex_count=graph.vertex_count, arc_count=graph.arc_count,
            elapsed_seconds=self._clock() - start,
        )

    def chi_o_exact(self, graph: OrientedDigraph) -> Tuple[int, VertexColoring]:
        """Exact chi_o with a witness, deepening r from a lower bound."""
        self._check_cap("chi_o_exact", self.config.oracle_vertex_cap, graph.vertex_count)
        if graph.vertex_count == 0:
            return 0, VertexColoring({}, 1)
        if graph.arc_count == 0:
            return 1, VertexColoring({v: 1 for v in graph.vertices}, 1)

        lower = 2
        if graph.vertex_count <= self.config.undirected_cap:
            lower = max(lower, self.analyzer.undirected_chromatic_number(graph))
        for r in range(lower, graph.vertex_count + 1):
            colors = self.find_coloring(graph, r)
            if colors is not None:
                self.logger.info(f"chi_o = {r} on {graph.vertex_count} vertices")
                return r, VertexColoring(colors, r)
        # all-distinct colors always work, so the loop returns above
        return graph.vertex_count, VertexColoring(
            {v: i for i, v in enumerate(graph.vertices, start=1)}, graph.vertex_count
        )

    def chi_o_index_exact(self, graph: OrientedDigraph) -> Tuple[int, ArcColoring]:
        """chi_o of the line digraph pulled back to the arcs; 0 for arcless graphs."""
        if graph.arc_count == 0:
            return 0, ArcColoring({}, 1)
        self._check_cap("chi_o_index_exact", self.config.oracle_vertex_cap, graph.arc_count)
        value, coloring = self.chi_o_exact(graph.line_digraph())
        return value, ArcColoring(coloring.colors, coloring.r)

    def is_colorable(self, graph: OrientedDigraph, r: int) -> bool:
        self._check_cap("is_colorable", self.config.oracle_vertex_cap, graph.vertex_count)
        if graph.vertex_count == 0:
            return True
        return r >= 1 and self.find_coloring(graph, r) is not None

    def find_coloring(self, graph: OrientedDigraph, r: int) -> Optional[Dict]:
        """Oriented coloring with colors 1..r, or None."""
        index = graph.vertex_index
        n = graph.vertex_count
        neighbors: List[List[Tuple[int, bool]]] = [[] for _ in range(n)]
        for tail, head in graph.arcs:
            t, h = index[tail], index[head]
            neighbors[t].append((h, True))
            neighbors[h].append((t, False))

        order = self._search_order(neighbors)
        placed_before = [[] for _ in range(n)]
        rank = {vertex: position for position, vertex in enumerate(order)}
        for vertex in range(n):
            placed_before[vertex] = [(w, forward) for w, forward in neighbors[vertex] if rank[w] < rank[vertex]]

        colors = [0] * n
        direction = [[0] * (r + 1) for _ in range(r + 1)]

        def place(position: int, used: int) -> bool:
            if position == n:
                return True
            vertex = order[position]
            for color in range(1, min(used + 1, r) + 1):
                applied = []
                feasible = True
                for w, forward in placed_before[vertex]:
                    other = colors[w]
                    if other == color:
                        feasible = False
                        break
                    a, b = (color, other) if forward else (other, color)
                    if direction[b][a]:
                        feasible = False
                        break
                    direction[a][b] += 1
                    applied.append((a, b))
                if feasible:
                    colors[vertex] = color
                    if place(position + 1, max(used, color)):
                        return True
                    colors[vertex] = 0
                for a, b in applied:
                    direction[a][b] -= 1
            return False

        if not place(0, 0):
            return None
        return {graph.vertices[i]: colors[i] for i in range(n)}

    @staticmethod
    def _search_order(neighbors: List[List[Tuple[int, bool]]]) -> List[int]:
        """Most already-placed neighbors first, ties by degree, then by index."""
        n = len(neighbors)
        distinct = [set(w for w, _ in adjacent) for adjacent in neighbors]
        placed_count = [0] * n
        remaining = set(range(n))
        order = []
        while remaining:
            vertex = max(remaining, key=lambda v: (placed_count[v], len(distinct[v]), -v))
            remaining.discard(vertex)
            order.append(vertex)
            for w in distinct[vertex]:
                placed_count[w] += 1
        return order
