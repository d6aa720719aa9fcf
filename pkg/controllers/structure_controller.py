"""
Small-graph structural checks used as test oracles: isomorphism and the
chromatic number of the underlying undirected graph.
"""
import logging
from typing import Dict, List, Optional

import networkx as nx

from models.digraph import OrientedDigraph
from models.errors import SizeCapExceededError
from models.solver_config import SolverConfig


class StructureAnalyzer:
    """Exact structural queries with hard size caps."""

    def __init__(self, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig()
        self.logger = logging.getLogger(self.__class__.__name__)

    def isomorphic(self, first: OrientedDigraph, second: OrientedDigraph) -> bool:
        """Arc-preserving bijection respecting multiplicities (VF2 on multidigraphs)."""
        cap = self.config.isomorphism_cap
        for graph in (first, second):
            if graph.vertex_count > cap:
                self.logger.error(f"Isomorphism test refused: {graph.vertex_count} vertices")
                raise SizeCapExceededError("isomorphic", cap, graph.vertex_count)
        if first.vertex_count != second.vertex_count or first.arc_count != second.arc_count:
            return False
        if sorted(first.arc_multiplicities().values()) != sorted(second.arc_multiplicities().values()):
            return False
        return nx.is_isomorphic(first.to_networkx(), second.to_networkx())

    def undirected_chromatic_number(self, graph: OrientedDigraph) -> int:
        """Exact chromatic number of the underlying graph by backtracking."""
        cap = self.config.undirected_cap
        if graph.vertex_count > cap:
            self.logger.error(f"Undirected coloring refused: {graph.vertex_count} vertices")
            raise SizeCapExceededError("undirected_chromatic_number", cap, graph.vertex_count)
        if graph.vertex_count == 0:
            return 0
        underlying = graph.underlying_graph()
        if underlying.number_of_edges() == 0:
            return 1

        order = self._search_order(underlying)
        neighbors = {v: set(underlying.neighbors(v)) for v in underlying}
        # greedy coloring gives the starting upper bound
        upper = max(nx.greedy_color(underlying, strategy='largest_first').values()) + 1
        for k in range(2, upper):
            if self._colorable(order, neighbors, k):
                return k
        return upper

    @staticmethod
    def _search_order(graph: nx.Graph) -> List:
        remaining = list(graph.nodes)
        placed = set()
        order = []
        while remaining:
            best = max(remaining, key=lambda v: (
                sum(1 for w in graph.neighbors(v) if w in placed), graph.degree(v)
            ))
            remaining.remove(best)
            placed.add(best)
            order.append(best)
        return order

    @staticmethod
    def _colorable(order: List, neighbors: Dict, k: int) -> bool:
        colors: Dict = {}

        def place(index: int, used: int) -> bool:
            if index == len(order):
                return True
            vertex = order[index]
            blocked = {colors[w] for w in neighbors[vertex] if w in colors}
            for color in range(1, min(used + 1, k) + 1):
                if color in blocked:
                    continue
                colors[vertex] = color
                if place(index + 1, max(used, color)):
                    return True
                del colors[vertex]
            return False

        return place(0, 0)
