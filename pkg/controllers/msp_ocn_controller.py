"""
Oriented chromatic number of minimal series-parallel digraphs.

States are triples (H, S, T): the color graph of an oriented coloring of the
node's subgraph together with the set of colors on its sources and the set of
colors on its sinks. A series composition joins every sink to every source, so
it adds the color graph arcs T1 x S2. Line digraphs of esp-digraphs are
msp-digraphs, which makes this the route to the oriented chromatic index of
esp expressions as well.
"""
from functools import lru_cache
from typing import Dict, FrozenSet, Hashable, Optional, Tuple

from controllers.base_controller import BaseSolver
from controllers.expression_controller import ExpressionEvaluator
from models.color_graph import ColorGraph, MAX_LABEL, arc_bit, label_bit, labels_of
from models.digraph import ArcColoring, OrientedDigraph, VertexColoring
from models.dp_state import DpRun, OcnSetTriple
from models.errors import SpColoringError
from models.expression import Flavor, NodeKind, SpExpression
from models.solve_result import ChromaticResult, Method, Problem
from models.solver_config import SolverConfig


@lru_cache(maxsize=MAX_LABEL + 1)
def leaf_states(palette: int = MAX_LABEL) -> FrozenSet[OcnSetTriple]:
    """A single vertex colored c, for c in 1..palette."""
    return frozenset(
        OcnSetTriple(ColorGraph(label_bit(c), 0, 0), label_bit(c), label_bit(c))
        for c in range(1, palette + 1)
    )


@lru_cache(maxsize=16384)
def join_arcs(sink_colors: int, source_colors: int) -> Tuple[int, int]:
    """(fwd, rev) words of the arcs T x S; equal colors give a loop."""
    fwd = rev = 0
    for i in labels_of(sink_colors):
        for j in labels_of(source_colors):
            fwd |= arc_bit(i, j)
            rev |= arc_bit(j, i)
    return fwd, rev


def state_order(state: OcnSetTriple) -> tuple:
    return (state.h.order, state.h.labels, state.h.fwd, state.ell, state.r)


def number_lower_bound(graph: OrientedDigraph) -> int:
    """1 without arcs, 2 with an arc, 3 with a directed path on three vertices."""
    if graph.arc_count == 0:
        return 1
    if any(graph.indegree(v) and graph.outdegree(v) for v in graph.vertices):
        return 3
    return 2


class MspOcnSolver(BaseSolver):
    """Bottom-up dynamic program over msp decomposition trees for vertex colorings."""

    def __init__(self, config: Optional[SolverConfig] = None,
                 evaluator: Optional[ExpressionEvaluator] = None):
        super().__init__(config)
        self.evaluator = evaluator or ExpressionEvaluator(self.config)

    def ocn_leaf(self, palette: int = MAX_LABEL) -> FrozenSet[OcnSetTriple]:
        return leaf_states(palette)

    def ocn_parallel(self, first: FrozenSet[OcnSetTriple],
                     second: FrozenSet[OcnSetTriple]) -> FrozenSet[OcnSetTriple]:
        """(H1 + H2, S1 | S2, T1 | T2) for every pair with an oriented union."""
        return self._parallel(first, second)[0]

    def ocn_series(self, first: FrozenSet[OcnSetTriple],
                   second: FrozenSet[OcnSetTriple]) -> FrozenSet[OcnSetTriple]:
        """(H1 + H2 + T1 x S2, S1, T2) for every pair that stays oriented."""
        return self._series(first, second)[0]

    def _parallel(self, first, second) -> Tuple[FrozenSet[OcnSetTriple], Dict]:
        back: Dict[OcnSetTriple, tuple] = {}
        for t1 in first:
            h1 = t1.h
            for t2 in second:
                h2 = t2.h
                fwd, rev = h1.fwd | h2.fwd, h1.rev | h2.rev
                if fwd & rev:
                    continue
                state = OcnSetTriple(ColorGraph(h1.labels | h2.labels, fwd, rev), t1.ell | t2.ell, t1.r | t2.r)
                if state not in back:
                    back[state] = (t1, t2)
        return frozenset(back), back

    def _series(self, first, second) -> Tuple[FrozenSet[OcnSetTriple], Dict]:
        back: Dict[OcnSetTriple, tuple] = {}
        for t1 in first:
            h1 = t1.h
            for t2 in second:
                h2 = t2.h
                join_fwd, join_rev = join_arcs(t1.r, t2.ell)
                fwd = h1.fwd | h2.fwd | join_fwd
                rev = h1.rev | h2.rev | join_rev
                if fwd & rev:
                    continue
                state = OcnSetTriple(ColorGraph(h1.labels | h2.labels, fwd, rev), t1.ell, t2.r)
                if state not in back:
                    back[state] = (t1, t2)
        return frozenset(back), back

    def run(self, tree, palette: int = MAX_LABEL) -> DpRun:
        """One bottom-up pass with colors restricted to 1..palette."""
        run = DpRun(tree, palette, [None] * len(tree), [None] * len(tree))
        cache: Dict[tuple, tuple] = {}
        leaves = self.ocn_leaf(palette)
        for node in range(len(tree)):
            kind = tree.kinds[node]
            if kind is NodeKind.LEAF:
                run.states[node] = leaves
                continue
            first, second = run.states[tree.left[node]], run.states[tree.right[node]]
            key = (kind, first, second)
            combined = cache.get(key)
            if combined is None:
                if kind is NodeKind.PARALLEL:
                    combined = self._parallel(first, second)
                else:
                    combined = self._series(first, second)
                if self.config.prune:
                    combined = self._prune_dominated(combined[1], lambda s: (s.ell, s.r))
                cache[key] = combined
            else:
                run.cache_hits += 1
            run.states[node], run.back[node] = combined
            if not combined[0]:
                run.exhausted_at = node
                run.states[tree.root] = frozenset()
                break
        return run

    def solve(self, subject: SpExpression, witness: bool = True) -> ChromaticResult:
        """chi_o of the evaluated msp expression with a witness coloring."""
        self._require_flavor(subject, Flavor.MSP)
        start = self._clock()
        evaluation = self.evaluator.evaluate(subject)
        graph = evaluation.graph
        run = None
        for palette in self._palettes(number_lower_bound(graph)):
            run = self.run(evaluation.tree, palette)
            self.logger.debug(
                f"Palette {palette}: {len(run.root_states)} root states, "
                f"largest set {run.largest_state_set}, cache hits {run.cache_hits}"
            )
            if run.root_states:
                break
        if run is None or not run.root_states:
            raise SpColoringError("No oriented coloring found for an msp expression")

        best = min(run.root_states, key=state_order)
        coloring = None
        if witness:
            raw = self.extract_colors(run, best)
            coloring = VertexColoring({v: raw[v] for v in graph.vertices}, run.palette)
        elapsed = self._clock() - start
        self.logger.info(f"chi_o = {best.h.order} (palette {run.palette}, {elapsed:.3f}s)")
        return ChromaticResult(
            Problem.OCN, Method.DYNAMIC_PROGRAM, best.h.order, coloring, best.h,
            vertex_count=graph.vertex_count, arc_count=graph.arc_count,
            palette=run.palette, elapsed_seconds=elapsed,
        )

    def solve_esp_index(self, expression: SpExpression, witness: bool = True) -> ChromaticResult:
        """chi'_o of an esp expression as chi_o of its line digraph.

        Vertex ``e{k}`` of the line expression is arc ``k`` of the esp digraph, so
        the vertex coloring pulls back to an arc coloring directly.
        """
        self._require_flavor(expression, Flavor.ESP)
        start = self._clock()
        graph = self.evaluator.evaluate(expression).graph
        line = self.solve(self.evaluator.line_msp_expression(expression), witness)
        coloring = None
        if witness:
            coloring = ArcColoring({k: line.coloring[f"e{k}"] for k in range(graph.arc_count)},
                                   line.coloring.r)
        return ChromaticResult(
            Problem.OCI, Method.DYNAMIC_PROGRAM, line.value, coloring, line.color_graph,
            vertex_count=graph.vertex_count, arc_count=graph.arc_count,
            palette=line.palette, elapsed_seconds=self._clock() - start,
        )

    def extract_colors(self, run: DpRun, state: OcnSetTriple) -> Dict[Hashable, int]:
        """Leaf colors along the records that produced ``state`` at the root."""
        tree = run.tree
        chosen = [None] * len(tree)
        chosen[tree.root] = state
        colors: Dict[Hashable, int] = {}
        for node in reversed(range(len(tree))):
            current = chosen[node]
            if tree.kinds[node] is NodeKind.LEAF:
                colors[tree.source(node)] = labels_of(current.ell)[0]
            else:
                left_state, right_state = run.back[node][current]
                chosen[tree.left[node]] = left_state
                chosen[tree.right[node]] = right_state
        return colors
