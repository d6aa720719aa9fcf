"""
Oriented chromatic number of edge series-parallel digraphs.

The dynamic program keeps, for every node of the decomposition tree, the set of
triples (H, l, r) such that the subgraph of that node has an oriented coloring
whose color graph is exactly H, with source colored l and sink colored r.
The answer is the smallest |V_H| at the root. Also provides the constructive
coloring into the tournament QR7.
"""
from functools import lru_cache
from typing import Dict, FrozenSet, Hashable, Optional, Tuple

from controllers.base_controller import BaseSolver
from controllers.expression_controller import Evaluation, ExpressionEvaluator
from models.color_graph import ColorGraph, MAX_LABEL, arc_bit, label_bit, qr7_middle
from models.digraph import VertexColoring
from models.dp_state import DpRun, OcnTriple
from models.errors import SpColoringError
from models.expression import Flavor, NodeKind, SpExpression
from models.solve_result import ChromaticResult, Method, Problem
from models.solver_config import SolverConfig


@lru_cache(maxsize=MAX_LABEL + 1)
def leaf_states(palette: int = MAX_LABEL) -> FrozenSet[OcnTriple]:
    """(({i, j}, {(i, j)}), i, j) for all distinct i, j in 1..palette."""
    return frozenset(
        OcnTriple(ColorGraph(label_bit(i) | label_bit(j), arc_bit(i, j), arc_bit(j, i)), i, j)
        for i in range(1, palette + 1)
        for j in range(1, palette + 1)
        if i != j
    )


def state_order(state: OcnTriple) -> tuple:
    """Deterministic preference among root states: fewest labels first."""
    return (state.h.order, state.h.labels, state.h.fwd, state.ell, state.r)


class EspOcnSolver(BaseSolver):
    """Bottom-up dynamic program over esp decomposition trees."""

    def __init__(self, config: Optional[SolverConfig] = None,
                 evaluator: Optional[ExpressionEvaluator] = None):
        super().__init__(config)
        self.evaluator = evaluator or ExpressionEvaluator(self.config)

    def ocn_leaf(self, palette: int = MAX_LABEL) -> FrozenSet[OcnTriple]:
        return leaf_states(palette)

    def ocn_parallel(self, first: FrozenSet[OcnTriple], second: FrozenSet[OcnTriple]) -> FrozenSet[OcnTriple]:
        """Pairs with equal source colors, equal sink colors and an oriented union."""
        return self._parallel(first, second)[0]

    def ocn_series(self, first: FrozenSet[OcnTriple], second: FrozenSet[OcnTriple]) -> FrozenSet[OcnTriple]:
        """Pairs whose shared middle vertex agrees (r1 = l2) and whose union is oriented."""
        return self._series(first, second)[0]

    def _parallel(self, first, second) -> Tuple[FrozenSet[OcnTriple], Dict]:
        by_terminals: Dict[Tuple[int, int], list] = {}
        for t2 in second:
            by_terminals.setdefault((t2.ell, t2.r), []).append(t2)
        back: Dict[OcnTriple, tuple] = {}
        for t1 in first:
            h1 = t1.h
            for t2 in by_terminals.get((t1.ell, t1.r), ()):
                h2 = t2.h
                fwd, rev = h1.fwd | h2.fwd, h1.rev | h2.rev
                if fwd & rev:
                    continue
                state = OcnTriple(ColorGraph(h1.labels | h2.labels, fwd, rev), t1.ell, t1.r)
                if state not in back:
                    back[state] = (t1, t2)
        return frozenset(back), back

    def _series(self, first, second) -> Tuple[FrozenSet[OcnTriple], Dict]:
        by_source: Dict[int, list] = {}
        for t2 in second:
            by_source.setdefault(t2.ell, []).append(t2)
        back: Dict[OcnTriple, tuple] = {}
        for t1 in first:
            h1 = t1.h
            for t2 in by_source.get(t1.r, ()):
                h2 = t2.h
                fwd, rev = h1.fwd | h2.fwd, h1.rev | h2.rev
                if fwd & rev:
                    continue
                state = OcnTriple(ColorGraph(h1.labels | h2.labels, fwd, rev), t1.ell, t2.r)
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
        return run

    def solve(self, subject: SpExpression, witness: bool = True) -> ChromaticResult:
        """chi_o of the evaluated expression with a witness coloring."""
        self._require_flavor(subject, Flavor.ESP)
        start = self._clock()
        evaluation = self.evaluator.evaluate(subject)
        run = None
        for palette in self._palettes(2):
            run = self.run(evaluation.tree, palette)
            self.logger.debug(
                f"Palette {palette}: {len(run.root_states)} root states, "
                f"largest set {run.largest_state_set}, cache hits {run.cache_hits}"
            )
            if run.root_states:
                break
        if run is None or not run.root_states:
            raise SpColoringError("No oriented coloring found for an esp expression")

        best = min(run.root_states, key=state_order)
        coloring = None
        if witness:
            raw = self.extract_colors(run, best)
            coloring = VertexColoring({v: raw[v] for v in evaluation.graph.vertices}, run.palette)
        elapsed = self._clock() - start
        self.logger.info(f"chi_o = {best.h.order} (palette {run.palette}, {elapsed:.3f}s)")
        return ChromaticResult(
            Problem.OCN, Method.DYNAMIC_PROGRAM, best.h.order, coloring, best.h,
            vertex_count=evaluation.graph.vertex_count, arc_count=evaluation.graph.arc_count,
            palette=run.palette, elapsed_seconds=elapsed,
        )

    def chi_o_esp(self, expression: SpExpression) -> Tuple[int, VertexColoring]:
        result = self.solve(expression)
        return result.value, result.coloring

    def extract_colors(self, run: DpRun, state: OcnTriple) -> Dict[Hashable, int]:
        """Top-down replay of the records that produced ``state`` at the root.

        Colors are the raw labels of the chosen states, so the realized color
        graph equals ``state.h``.
        """
        tree = run.tree
        chosen = [None] * len(tree)
        chosen[tree.root] = state
        colors: Dict[Hashable, int] = {}
        for node in reversed(range(len(tree))):
            current = chosen[node]
            if tree.kinds[node] is NodeKind.LEAF:
                colors[tree.source(node)] = current.ell
                colors[tree.sink(node)] = current.r
            else:
                left_state, right_state = run.back[node][current]
                chosen[tree.left[node]] = left_state
                chosen[tree.right[node]] = right_state
        return colors

    def color_esp_qr7(self, expression: SpExpression,
                      evaluation: Optional[Evaluation] = None) -> VertexColoring:
        """Homomorphism into QR7 with the source colored 1 and the sink colored 2.

        Every node receives a color pair (a, c) that is an arc of QR7. Parallel
        children inherit it; series children get (a, b) and (b, c) for the middle
        color b = qr7_middle(a, c).
        """
        self._require_flavor(expression, Flavor.ESP)
        evaluation = evaluation or self.evaluator.evaluate(expression)
        tree = evaluation.tree
        pairs = [None] * len(tree)
        pairs[tree.root] = (1, 2)
        colors: Dict[Hashable, int] = {}
        for node in reversed(range(len(tree))):
            a, c = pairs[node]
            kind = tree.kinds[node]
            if kind is NodeKind.LEAF:
                colors[tree.source(node)] = a
                colors[tree.sink(node)] = c
            elif kind is NodeKind.PARALLEL:
                pairs[tree.left[node]] = pairs[tree.right[node]] = (a, c)
            else:
                b = qr7_middle(a, c)
                pairs[tree.left[node]] = (a, b)
                pairs[tree.right[node]] = (b, c)
        return VertexColoring({v: colors[v] for v in evaluation.graph.vertices}, MAX_LABEL)
