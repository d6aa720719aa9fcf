"""
Oriented chromatic index of minimal series-parallel digraphs.

States are triples (H, L, R): H is the color graph induced on the arc colors
(consecutive arcs give color graph arcs), L the family of out-color sets of the
sources and R the family of in-color sets of the sinks. A series composition
colors every new arc from a sink with in-colors R_i to a source with out-colors
L_j by one color u(R_i, L_j). The answer is the smallest |V_H| over root states
with an oriented H.

The pairs of R1 x L2 receive their colors one at a time over a deduplicated set
of partial states, so two assignments that reach the same partial color graph
are continued once. Every state set is closed under permutations of the
palette; with symmetry reduction on, only one left operand per permutation
orbit is combined and the result is closed again afterwards.
"""
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple

from controllers.base_controller import BaseSolver
from controllers.expression_controller import Evaluation, ExpressionEvaluator
from models.color_graph import (
    ColorGraph, IDENTITY, MAX_LABEL, arc_bit, compose, mask_permutation, palette_generators
)
from models.digraph import ArcColoring, OrientedDigraph
from models.dp_state import DpRun, OciTriple, decode_family
from models.errors import SpColoringError
from models.expression import Flavor, NodeKind, SpExpression
from models.solve_result import ChromaticResult, Method, Problem
from models.solver_config import SolverConfig

EMPTY_SET_FAMILY = 1  # family holding only the empty color set

LEAF_STATES: FrozenSet[OciTriple] = frozenset({OciTriple(ColorGraph(), EMPTY_SET_FAMILY, EMPTY_SET_FAMILY)})

# (labels, fwd, rev, L1, R2, colors from the isolated left vertices, colors into the isolated right vertices)
Partial = Tuple[int, int, int, int, int, int, int]


class RelabeledRecord(NamedTuple):
    """Generating record of a state reached by relabeling another state of the same node."""
    record: tuple
    permutation: Tuple[int, ...]

    def resolve(self) -> tuple:
        """The record with child states, color-set pairs and colors relabeled."""
        perm = self.permutation
        first, second = self.record[0].relabel(perm), self.record[1].relabel(perm)
        if len(self.record) == 2:
            return first, second
        table = mask_permutation(perm)
        pairs = tuple((table[r_set], table[l_set]) for r_set, l_set in self.record[2])
        colors = tuple(perm[color - 1] for color in self.record[3])
        return first, second, pairs, colors


@lru_cache(maxsize=MAX_LABEL + 1)
def edge_tables(palette: int) -> Tuple[List[List[Tuple[int, int]]], List[List[Tuple[int, int]]]]:
    """(fwd, rev) words of the arcs R x {c} and {c} x L for every color set and color."""
    into = [[(0, 0)] * (palette + 1) for _ in range(128)]
    out_of = [[(0, 0)] * 128 for _ in range(palette + 1)]
    for mask in range(128):
        members = [i for i in range(1, MAX_LABEL + 1) if mask & (1 << (i - 1))]
        for color in range(1, palette + 1):
            fwd = rev = 0
            for i in members:
                fwd |= arc_bit(i, color)
                rev |= arc_bit(color, i)
            into[mask][color] = (fwd, rev)
            fwd = rev = 0
            for j in members:
                fwd |= arc_bit(color, j)
                rev |= arc_bit(j, color)
            out_of[color][mask] = (fwd, rev)
    return into, out_of


def state_order(state: OciTriple) -> tuple:
    return (state.h.order, state.h.labels, state.h.fwd, state.big_l, state.big_r)


def index_lower_bound(graph: OrientedDigraph) -> int:
    """1 with an arc, 2 with two consecutive arcs, 3 with three."""
    if graph.arc_count == 0:
        return 0
    bound = 1
    for tail, head in graph.arcs:
        if graph.indegree(tail) and graph.outdegree(head):
            return 3
        if graph.indegree(tail) or graph.outdegree(head):
            bound = 2
    return bound


class MspOciSolver(BaseSolver):
    """Bottom-up dynamic program over msp decomposition trees."""

    def __init__(self, config: Optional[SolverConfig] = None,
                 evaluator: Optional[ExpressionEvaluator] = None):
        super().__init__(config)
        self.evaluator = evaluator or ExpressionEvaluator(self.config)

    def oci_leaf(self) -> FrozenSet[OciTriple]:
        return LEAF_STATES

    def oci_parallel(self, first: FrozenSet[OciTriple], second: FrozenSet[OciTriple],
                     palette: int = MAX_LABEL) -> FrozenSet[OciTriple]:
        """(H1 + H2, L1 | L2, R1 | R2) for every pair."""
        return self.combine(NodeKind.PARALLEL, first, second, palette, symmetric=False)[0]

    def oci_series(self, first: FrozenSet[OciTriple], second: FrozenSet[OciTriple],
                   palette: int = MAX_LABEL) -> FrozenSet[OciTriple]:
        return self.combine(NodeKind.SERIES, first, second, palette, symmetric=False)[0]

    def combine(self, kind: NodeKind, first: FrozenSet[OciTriple], second: FrozenSet[OciTriple],
                palette: int, symmetric: Optional[bool] = None) -> Tuple[FrozenSet[OciTriple], Dict]:
        """State set of a parallel or series node and one generating record per state.

        Symmetry reduction (default: the configured switch) requires both operand
        sets to be closed under permutations of 1..palette, as every set of a run is.
        """
        if symmetric is None:
            symmetric = self.config.symmetry_reduction
        symmetric = symmetric and palette > 1
        left = self.orbit_representatives(first, palette) if symmetric else first
        if kind is NodeKind.PARALLEL:
            back = self._parallel(left, second)
        else:
            back = self._series(left, second, palette)
        if self.config.prune:
            back = self._prune_dominated(back, lambda s: (s.big_l, s.big_r))[1]
        if symmetric:
            back = self._close_under_relabeling(back, palette)
            if self.config.prune:
                back = self._prune_dominated(back, lambda s: (s.big_l, s.big_r))[1]
        return frozenset(back), back

    @staticmethod
    def orbit(state: OciTriple, palette: int) -> Dict[OciTriple, Tuple[int, ...]]:
        """Every relabeling of ``state`` within 1..palette, with a permutation reaching it."""
        generators = palette_generators(palette)
        found = {state: IDENTITY}
        frontier = [state]
        while frontier:
            reached = []
            for current in frontier:
                perm = found[current]
                for generator in generators:
                    image = current.relabel(generator)
                    if image not in found:
                        found[image] = compose(generator, perm)
                        reached.append(image)
            frontier = reached
        return found

    def orbit_representatives(self, states: Iterable[OciTriple], palette: int) -> List[OciTriple]:
        """Smallest state (by ``state_order``) of every permutation orbit in ``states``."""
        seen = set()
        representatives = []
        for state in sorted(states, key=state_order):
            if state in seen:
                continue
            representatives.append(state)
            seen.update(self.orbit(state, palette))
        return representatives

    def _close_under_relabeling(self, back: Dict[OciTriple, tuple], palette: int) -> Dict[OciTriple, tuple]:
        closed: Dict[OciTriple, tuple] = {}
        for state, record in back.items():
            if state in closed:
                continue
            for image, perm in self.orbit(state, palette).items():
                if image not in closed:
                    closed[image] = record if perm == IDENTITY else RelabeledRecord(record, perm)
        return closed

    def _parallel(self, first, second) -> Dict[OciTriple, tuple]:
        early = self.config.early_orientation_pruning
        back: Dict[OciTriple, tuple] = {}
        for t1 in first:
            h1 = t1.h
            for t2 in second:
                h2 = t2.h
                fwd, rev = h1.fwd | h2.fwd, h1.rev | h2.rev
                if early and fwd & rev:
                    continue
                state = OciTriple(ColorGraph(h1.labels | h2.labels, fwd, rev),
                                  t1.big_l | t2.big_l, t1.big_r | t2.big_r)
                if state not in back:
                    back[state] = (t1, t2)
        return back

    def _series(self, first, second, palette: int) -> Dict[OciTriple, tuple]:
        """Series combine, one color-set pair at a time.

        Left operands are grouped by R1 and right operands by L2; every group
        pair shares its color-set pairs, so all of its starting graphs H1 + H2
        are extended together.
        """
        early = self.config.early_orientation_pruning
        lefts: Dict[int, List[OciTriple]] = {}
        for t1 in first:
            lefts.setdefault(t1.big_r, []).append(t1)
        rights: Dict[int, List[OciTriple]] = {}
        for t2 in second:
            rights.setdefault(t2.big_l, []).append(t2)

        back: Dict[OciTriple, tuple] = {}
        for big_r1, group1 in lefts.items():
            r_sets = decode_family(big_r1)
            for big_l2, group2 in rights.items():
                pairs = tuple((r, l) for r in r_sets for l in decode_family(big_l2))
                starts: Dict[Partial, Tuple[OciTriple, OciTriple]] = {}
                for t1 in group1:
                    h1 = t1.h
                    for t2 in group2:
                        h2 = t2.h
                        fwd, rev = h1.fwd | h2.fwd, h1.rev | h2.rev
                        if early and fwd & rev:
                            continue
                        start = (h1.labels | h2.labels, fwd, rev, t1.big_l, t2.big_r, 0, 0)
                        if start not in starts:
                            starts[start] = (t1, t2)
                if not starts:
                    continue
                layers = self._assign_pairs(pairs, starts, palette,
                                            bool(big_r1 & EMPTY_SET_FAMILY), bool(big_l2 & EMPTY_SET_FAMILY))
                for partial in layers[-1]:
                    labels, fwd, rev, big_l, big_r, from_isolated, into_isolated = partial
                    colors = []
                    for layer in reversed(layers):
                        partial, color = layer[partial]
                        colors.append(color)
                    colors.reverse()
                    if big_l & EMPTY_SET_FAMILY:
                        # isolated vertices of the left operand become sources with new out-arcs
                        big_l = (big_l & ~EMPTY_SET_FAMILY) | (1 << from_isolated)
                    if big_r & EMPTY_SET_FAMILY:
                        big_r = (big_r & ~EMPTY_SET_FAMILY) | (1 << into_isolated)
                    state = OciTriple(ColorGraph(labels, fwd, rev), big_l, big_r)
                    if state not in back:
                        back[state] = starts[partial] + (pairs, tuple(colors))
        return back

    def _assign_pairs(self, pairs: Tuple[Tuple[int, int], ...], starts: Iterable[Partial], palette: int,
                      left_isolated: bool, right_isolated: bool) -> List[Dict[Partial, Tuple[Partial, int]]]:
        """Partial states after coloring each prefix of ``pairs``.

        Layer k maps every partial state reached after k + 1 pairs to the partial
        state it extends and the color given to pair k. Assigning color c to
        (R, L) adds the arcs R x {c} and {c} x L. The colors of pairs with an
        empty R (or L) are collected only when the left (right) operand has
        isolated vertices.
        """
        into, out_of = edge_tables(palette)
        early = self.config.early_orientation_pruning
        layer: Iterable[Partial] = starts
        layers: List[Dict[Partial, Tuple[Partial, int]]] = []
        for r_set, l_set in pairs:
            grow_from = left_isolated and r_set == 0
            grow_into = right_isolated and l_set == 0
            row = into[r_set]
            reached: Dict[Partial, Tuple[Partial, int]] = {}
            for partial in layer:
                labels, fwd, rev, big_l, big_r, from_isolated, into_isolated = partial
                for color in range(1, palette + 1):
                    in_fwd, in_rev = row[color]
                    out_fwd, out_rev = out_of[color][l_set]
                    next_fwd = fwd | in_fwd | out_fwd
                    next_rev = rev | in_rev | out_rev
                    if early and next_fwd & next_rev:
                        continue
                    bit = 1 << (color - 1)
                    key = (labels | bit, next_fwd, next_rev, big_l, big_r,
                           from_isolated | bit if grow_from else from_isolated,
                           into_isolated | bit if grow_into else into_isolated)
                    if key not in reached:
                        reached[key] = (partial, color)
            if self.config.prune:
                reached = self._prune_partials(reached)
            layers.append(reached)
            layer = reached
        return layers

    @staticmethod
    def _prune_partials(reached: Dict[Partial, tuple]) -> Dict[Partial, tuple]:
        """Keep the partial states whose graph contains no other graph with the same families."""
        groups: Dict[tuple, List[Partial]] = {}
        for partial in reached:
            groups.setdefault(partial[3:], []).append(partial)
        kept: Dict[Partial, tuple] = {}
        for members in groups.values():
            members.sort(key=lambda p: (p[0].bit_count() + p[1].bit_count(), p[0], p[1]))
            survivors: List[Partial] = []
            for partial in members:
                labels, fwd = partial[0], partial[1]
                if any(k[0] & ~labels == 0 and k[1] & ~fwd == 0 for k in survivors):
                    continue
                survivors.append(partial)
            for partial in survivors:
                kept[partial] = reached[partial]
        return kept

    def run(self, tree, palette: int = MAX_LABEL) -> DpRun:
        """One bottom-up pass assigning colors from 1..palette."""
        run = DpRun(tree, palette, [None] * len(tree), [None] * len(tree))
        cache: Dict[tuple, tuple] = {}
        for node in range(len(tree)):
            kind = tree.kinds[node]
            if kind is NodeKind.LEAF:
                run.states[node] = LEAF_STATES
                continue
            first, second = run.states[tree.left[node]], run.states[tree.right[node]]
            key = (kind, first, second)
            combined = cache.get(key)
            if combined is None:
                combined = self.combine(kind, first, second, palette)
                cache[key] = combined
                self.logger.debug(f"Node {node} ({kind.value}): {len(combined[0])} states")
            else:
                run.cache_hits += 1
            run.states[node], run.back[node] = combined
            if not combined[0]:
                # arcs only accumulate, so no ancestor can have a state either
                run.exhausted_at = node
                run.states[tree.root] = frozenset()
                self.logger.debug(f"Palette {palette} exhausted at node {node}")
                break
        return run

    @staticmethod
    def oriented_root_states(run: DpRun) -> List[OciTriple]:
        return [state for state in run.root_states if state.h.is_oriented]

    def solve(self, subject: SpExpression, witness: bool = True) -> ChromaticResult:
        """chi'_o of the evaluated expression with a witness arc coloring."""
        self._require_flavor(subject, Flavor.MSP)
        start = self._clock()
        evaluation = self.evaluator.evaluate(subject)
        graph = evaluation.graph
        if graph.arc_count == 0:
            return ChromaticResult(Problem.OCI, Method.DYNAMIC_PROGRAM, 0, ArcColoring({}, 1),
                                   ColorGraph(), graph.vertex_count, 0, 0, self._clock() - start)

        run, candidates = None, []
        for palette in self._palettes(index_lower_bound(graph)):
            run = self.run(evaluation.tree, palette)
            candidates = self.oriented_root_states(run)
            self.logger.debug(
                f"Palette {palette}: {len(run.root_states)} root states, {len(candidates)} oriented, "
                f"largest set {run.largest_state_set}"
            )
            if candidates:
                break
        if not candidates:
            raise SpColoringError("No oriented arc coloring found for an msp expression")

        best = min(candidates, key=state_order)
        coloring = None
        if witness:
            raw = self.extract_arc_colors(run, evaluation, best)
            coloring = ArcColoring({arc_id: raw[arc_id] for arc_id in range(graph.arc_count)}, run.palette)
        elapsed = self._clock() - start
        self.logger.info(f"chi'_o = {best.h.order} (palette {run.palette}, {elapsed:.3f}s)")
        return ChromaticResult(
            Problem.OCI, Method.DYNAMIC_PROGRAM, best.h.order, coloring, best.h,
            vertex_count=graph.vertex_count, arc_count=graph.arc_count,
            palette=run.palette, elapsed_seconds=elapsed,
        )

    def chi_o_index_msp(self, expression: SpExpression) -> Tuple[int, ArcColoring]:
        result = self.solve(expression)
        return result.value, result.coloring

    def extract_arc_colors(self, run: DpRun, evaluation: Evaluation, state: OciTriple) -> Dict[int, int]:
        """Arc coloring realizing ``state`` at the root.

        The generating records are traced top-down; then the series nodes are
        replayed bottom-up, tracking the in- and out-color sets of every vertex,
        and each new arc (s, t) gets u(in-colors of s, out-colors of t).
        """
        tree = run.tree
        chosen = [None] * len(tree)
        chosen[tree.root] = state
        assignment: List[Optional[Dict[Tuple[int, int], int]]] = [None] * len(tree)
        for node in reversed(range(len(tree))):
            if tree.kinds[node] is NodeKind.LEAF:
                continue
            record = run.back[node][chosen[node]]
            if isinstance(record, RelabeledRecord):
                record = record.resolve()
            chosen[tree.left[node]] = record[0]
            chosen[tree.right[node]] = record[1]
            if tree.kinds[node] is NodeKind.SERIES:
                assignment[node] = dict(zip(record[2], record[3]))

        in_colors = {vertex: 0 for vertex in evaluation.graph.vertices}
        out_colors = dict(in_colors)
        colors: Dict[int, int] = {}
        for node in range(len(tree)):
            if tree.kinds[node] is not NodeKind.SERIES:
                continue
            u = assignment[node]
            arc_id = tree.arc_start[node]
            added = []
            for tail in tree.sinks[tree.left[node]]:
                for head in tree.sources[tree.right[node]]:
                    color = u[(in_colors[tail], out_colors[head])]
                    colors[arc_id] = color
                    added.append((tail, head, 1 << (color - 1)))
                    arc_id += 1
            for tail, head, bit in added:
                out_colors[tail] |= bit
                in_colors[head] |= bit
        return colors
