"""
Tests for the oriented chromatic index of msp expressions.
"""
import pytest

from controllers.msp_oci_controller import (
    EMPTY_SET_FAMILY, MspOciSolver, RelabeledRecord, edge_tables, index_lower_bound
)
from controllers.validation_controller import ColoringValidator
from models.color_graph import ColorGraph, arc_bit, label_bit
from models.dp_state import OciTriple, encode_family
from models.errors import FlavorMismatchError
from models.expression import NodeKind
from models.solve_result import Method, Problem
from models.solver_config import SolverConfig

ROOTED_TREE = ("r", [("a", [("d", []), ("e", [("f", [])])]), ("b", []), ("c", [("g", [])])])


def _regenerate(record, kind: NodeKind, palette: int) -> OciTriple:
    """Recombine the child states of a generating record by hand."""
    if isinstance(record, RelabeledRecord):
        record = record.resolve()
    t1, t2 = record[0], record[1]
    h = t1.h.union(t2.h)
    if kind is NodeKind.PARALLEL:
        return OciTriple(h, t1.big_l | t2.big_l, t1.big_r | t2.big_r)
    into, out_of = edge_tables(palette)
    labels, fwd, rev = h.labels, h.fwd, h.rev
    from_isolated = into_isolated = 0
    for (r_set, l_set), color in zip(record[2], record[3]):
        bit = 1 << (color - 1)
        labels |= bit
        fwd |= into[r_set][color][0] | out_of[color][l_set][0]
        rev |= into[r_set][color][1] | out_of[color][l_set][1]
        if r_set == 0:
            from_isolated |= bit
        if l_set == 0:
            into_isolated |= bit
    big_l, big_r = t1.big_l, t2.big_r
    if big_l & EMPTY_SET_FAMILY:
        big_l = (big_l & ~EMPTY_SET_FAMILY) | (1 << from_isolated)
    if big_r & EMPTY_SET_FAMILY:
        big_r = (big_r & ~EMPTY_SET_FAMILY) | (1 << into_isolated)
    return OciTriple(ColorGraph(labels, fwd, rev), big_l, big_r)


class TestOciStateSets:
    """Test the leaf, parallel and series state combinators."""

    def setup_method(self):
        """Setup test fixtures."""
        self.solver = MspOciSolver()

    def test_leaf_state(self):
        """Test the single leaf state with empty color set families."""
        assert self.solver.oci_leaf() == {OciTriple(ColorGraph(), EMPTY_SET_FAMILY, EMPTY_SET_FAMILY)}

    def test_parallel_of_two_vertices(self):
        """Test that two isolated vertices keep the leaf state."""
        leaf = self.solver.oci_leaf()
        assert self.solver.oci_parallel(leaf, leaf) == leaf

    def test_series_of_two_vertices(self):
        """Test one state per color for a single arc."""
        leaf = self.solver.oci_leaf()
        combined = self.solver.oci_series(leaf, leaf)
        assert len(combined) == 7
        for k in range(1, 8):
            family = encode_family([[k]])
            assert OciTriple(ColorGraph(label_bit(k), 0, 0), family, family) in combined

    def test_series_respects_palette(self):
        """Test that the palette bounds the arc colors."""
        leaf = self.solver.oci_leaf()
        assert len(self.solver.oci_series(leaf, leaf, palette=3)) == 3

    def test_parallel_unions_families(self):
        """Test that parallel composition unions the families."""
        leaf = self.solver.oci_leaf()
        arc = self.solver.oci_series(leaf, leaf, palette=1)
        combined = self.solver.oci_parallel(leaf, arc)
        (state,) = combined
        assert state.big_l == EMPTY_SET_FAMILY | encode_family([[1]])
        assert state.l_sets() == ((), (1,))

    def test_series_adds_color_graph_arcs(self):
        """Test that two consecutive arcs need two colors and give one color graph arc."""
        leaf = self.solver.oci_leaf()
        arc = self.solver.oci_series(leaf, leaf, palette=2)
        path = self.solver.oci_series(arc, leaf, palette=2)
        assert {s.h.arc_list()[0] for s in path} == {(1, 2), (2, 1)}
        assert all(s.h.is_oriented for s in path)

    def test_series_with_isolated_vertices(self):
        """Test that isolated vertices on both sides get the colors of their new arcs."""
        leaf = self.solver.oci_leaf()
        arc = self.solver.oci_series(leaf, leaf, palette=1)
        left = self.solver.oci_parallel(leaf, arc)
        combined = self.solver.oci_series(left, leaf, palette=2)
        # the isolated vertex and the head of the arc both point to the new vertex
        expected = OciTriple(ColorGraph.from_arcs([(1, 2)]), encode_family([[1], [2]]), encode_family([[2]]))
        assert expected in combined
        assert all(s.big_l & EMPTY_SET_FAMILY == 0 for s in combined)

    def test_edge_tables(self):
        """Test the precomputed arc words of R x {c} and {c} x L."""
        into, out_of = edge_tables(3)
        # color set {1, 2} into color 3
        assert into[0b011][3] == (arc_bit(1, 3) | arc_bit(2, 3), arc_bit(3, 1) | arc_bit(3, 2))
        assert out_of[2][0b100] == (arc_bit(2, 3), arc_bit(3, 2))
        assert into[0][1] == (0, 0)


class TestColorSymmetry:
    """Test orbit reduction under permutations of the palette."""

    def setup_method(self):
        """Setup test fixtures."""
        self.solver = MspOciSolver()
        self.plain = MspOciSolver(SolverConfig(symmetry_reduction=False))

    def test_orbit_of_single_arc_state(self):
        """Test that a one-color state has one image per color."""
        state = OciTriple(ColorGraph(label_bit(1), 0, 0), encode_family([[1]]), encode_family([[1]]))
        orbit = self.solver.orbit(state, 7)
        assert len(orbit) == 7
        for image, perm in orbit.items():
            assert state.relabel(perm) == image

    def test_orbit_respects_palette(self):
        """Test that relabeling stays inside the palette."""
        state = OciTriple(ColorGraph.from_arcs([(1, 2)]), encode_family([[1]]), encode_family([[2]]))
        assert len(self.solver.orbit(state, 3)) == 6
        assert len(self.solver.orbit(state, 1)) == 1

    def test_representatives(self):
        """Test one representative per orbit, the smallest one."""
        leaf = self.solver.oci_leaf()
        states = self.solver.oci_series(leaf, leaf)
        (representative,) = self.solver.orbit_representatives(states, 7)
        assert representative.h.labels == label_bit(1)

    def test_relabeled_record_resolves(self):
        """Test that a relabeled record maps child states, color sets and colors."""
        first = OciTriple(ColorGraph(label_bit(1), 0, 0), encode_family([[1]]), encode_family([[1]]))
        second = OciTriple(ColorGraph(), EMPTY_SET_FAMILY, EMPTY_SET_FAMILY)
        swap = (2, 1, 3, 4, 5, 6, 7)
        resolved = RelabeledRecord((first, second, ((0b001, 0),), (2,)), swap).resolve()
        assert resolved[0].h.labels == label_bit(2)
        assert resolved[1] == second
        assert resolved[2] == ((0b010, 0),)
        assert resolved[3] == (1,)

    @pytest.mark.parametrize("palette", [2, 3, 4])
    @pytest.mark.parametrize("prune", [False, True])
    def test_same_state_sets_with_and_without_symmetry(self, fixtures, generator, evaluator, palette, prune):
        """Test that orbit reduction changes no state set of a run."""
        solver = MspOciSolver(SolverConfig(prune=prune))
        plain = MspOciSolver(SolverConfig(prune=prune, symmetry_reduction=False))
        for expression in (fixtures.fixture("X4"), generator.msp_y(2), generator.msp_rooted_tree(ROOTED_TREE)):
            tree = evaluator.evaluate(expression).tree
            reduced, full = solver.run(tree, palette), plain.run(tree, palette)
            assert reduced.exhausted_at == full.exhausted_at
            assert reduced.states == full.states

    def test_pruned_partials_keep_the_minimal_states(self, fixtures, evaluator):
        """Test that pruning partial assignments leaves the pruned root set unchanged."""
        tree = evaluator.evaluate(fixtures.fixture("X4")).tree
        pruned = MspOciSolver(SolverConfig(prune=True))
        full = self.plain.run(tree, 4)
        expected = pruned._prune_dominated({s: None for s in full.root_states}, lambda s: (s.big_l, s.big_r))[0]
        assert pruned.run(tree, 4).root_states == expected


class TestDpRunRecords:
    """Test the per-node state sets and generating records of a run."""

    def setup_method(self):
        """Setup test fixtures."""
        self.solver = MspOciSolver()

    @pytest.mark.parametrize("name,palette", [("X4", 7), ("Y2", 4), ("tree", 3)])
    def test_records_regenerate_their_states(self, fixtures, generator, evaluator, name, palette):
        """Test that every state is the exact combination of its recorded children."""
        expression = {
            "X4": fixtures.fixture("X4"),
            "Y2": generator.msp_y(2),
            "tree": generator.msp_rooted_tree(ROOTED_TREE),
        }[name]
        tree = evaluator.evaluate(expression).tree
        run = self.solver.run(tree, palette)
        for node in range(len(tree)):
            if tree.kinds[node] is NodeKind.LEAF or run.states[node] is None:
                continue
            for state in run.states[node]:
                record = run.back[node][state]
                assert _regenerate(record, tree.kinds[node], palette) == state
                resolved = record.resolve() if isinstance(record, RelabeledRecord) else record
                assert resolved[0] in run.states[tree.left[node]]
                assert resolved[1] in run.states[tree.right[node]]
                # arcs only accumulate from the children to the parent
                assert resolved[0].h.is_subgraph_of(state.h)
                assert resolved[1].h.is_subgraph_of(state.h)

    def test_failing_palette_stops_at_first_empty_node(self, generator, evaluator):
        """Test that a palette that is too small stops the pass early."""
        tree = evaluator.evaluate(generator.msp_chain(8)).tree
        run = self.solver.run(tree, 2)
        assert run.exhausted_at is not None
        assert run.exhausted_at < tree.root
        assert run.root_states == frozenset()
        assert run.largest_state_set > 0

    def test_root_graph_is_the_realized_color_graph(self, fixtures, evaluator, validator):
        """Test that the best root H equals the homomorphic image of the witness."""
        expression = fixtures.fixture("X4")
        result = self.solver.solve(expression)
        line = evaluator.evaluate(expression).graph.line_digraph()
        realized = validator.realized_color_graph(line, result.coloring.as_vertex_coloring())
        assert realized == result.color_graph
        assert realized.order == result.value


class TestMspOciSolver:
    """Test chi'_o values and witnesses."""

    def setup_method(self):
        """Setup test fixtures."""
        self.solver = MspOciSolver()
        self.validator = ColoringValidator()

    def _check_witness(self, evaluator, expression, result):
        graph = evaluator.evaluate(expression).graph
        assert self.validator.validate_arc_coloring(graph, result.coloring)
        assert len(set(result.coloring.colors.values())) <= result.value

    @pytest.mark.parametrize("n,expected", [(2, 1), (3, 2), (4, 3), (8, 3)])
    def test_chains(self, generator, evaluator, n, expected):
        """Test chi'_o of msp chains."""
        expression = generator.msp_chain(n)
        result = self.solver.solve(expression)
        assert result.value == expected
        assert result.problem is Problem.OCI
        assert result.method is Method.DYNAMIC_PROGRAM
        self._check_witness(evaluator, expression, result)

    def test_index_lower_bound(self, single_arc, path3, generator, evaluator):
        """Test the structural bound that starts the palette search."""
        assert index_lower_bound(single_arc) == 1
        assert index_lower_bound(path3) == 2
        assert index_lower_bound(evaluator.evaluate(generator.msp_chain(4)).graph) == 3
        assert index_lower_bound(evaluator.evaluate(generator.msp_chain(1)).graph) == 0

    def test_arcless_expressions(self, generator, parser):
        """Test that arcless expressions have index 0 and an empty witness."""
        for expression in (generator.msp_chain(1), parser.parse("a + b + c", "msp")):
            result = self.solver.solve(expression)
            assert result.value == 0
            assert result.coloring.colors == {}
            assert result.color_graph == ColorGraph()

    def test_complete_bipartite(self, generator, evaluator):
        """Test that every arc of a complete bipartite digraph can share one color."""
        expression = generator.msp_bipartite(2, 2)
        value, coloring = self.solver.chi_o_index_msp(expression)
        assert value == 1
        assert set(coloring.colors.values()) == {1}

    def test_out_star(self, generator):
        """Test an out-star given as a rooted tree."""
        tree = ("r", [("a", []), ("b", []), ("c", [])])
        assert self.solver.solve(generator.msp_rooted_tree(tree)).value == 1

    def test_rooted_tree_matches_oracle(self, generator, evaluator, oracle):
        """Test a deeper rooted tree against the exact oracle."""
        expression = generator.msp_rooted_tree(ROOTED_TREE)
        result = self.solver.solve(expression)
        graph = evaluator.evaluate(expression).graph
        assert result.value == oracle.chi_o_index_exact(graph)[0]
        self._check_witness(evaluator, expression, result)

    def test_x4_matches_oracle(self, fixtures, evaluator, oracle):
        """Test the msp fixture X4 against the exact oracle."""
        expression = fixtures.fixture("X4")
        result = self.solver.solve(expression)
        graph = evaluator.evaluate(expression).graph
        assert result.value == oracle.chi_o_index_exact(graph)[0]
        self._check_witness(evaluator, expression, result)

    def test_y_family_matches_oracle(self, generator, evaluator, oracle):
        """Test the first members of the Y family against the exact oracle."""
        for i in range(3):
            expression = generator.msp_y(i)
            graph = evaluator.evaluate(expression).graph
            assert self.solver.solve(expression).value == oracle.chi_o_index_exact(graph)[0]

    def test_wrong_flavor(self, fixtures):
        """Test that esp expressions are rejected."""
        with pytest.raises(FlavorMismatchError):
            self.solver.solve(fixtures.fixture("X1"))

    @pytest.mark.parametrize("config", [
        SolverConfig(prune=True),
        SolverConfig(early_orientation_pruning=False),
        SolverConfig(palette_deepening=False),
        SolverConfig(symmetry_reduction=False),
    ])
    def test_switches_keep_the_value(self, fixtures, generator, evaluator, config):
        """Test that every solver switch keeps the value and a valid witness."""
        solver = MspOciSolver(config)
        for expression in (fixtures.fixture("X4"), generator.msp_y(2), generator.msp_chain(5)):
            result = solver.solve(expression)
            assert result.value == self.solver.solve(expression).value
            self._check_witness(evaluator, expression, result)

    def test_long_chain(self, generator):
        """Test a chain of 2000 vertices without a witness."""
        result = self.solver.solve(generator.msp_chain(2000), witness=False)
        assert result.value == 3
        assert result.arc_count == 1999

    @pytest.mark.slow
    def test_x6_needs_seven_colors(self, fixtures, evaluator):
        """Test that the 131 vertex fixture X6 needs seven arc colors, with pruning as in the benchmarks."""
        solver = MspOciSolver(SolverConfig(prune=True))
        expression = fixtures.fixture("X6")
        result = solver.solve(expression)
        assert result.value == 7
        assert result.vertex_count == 131
        self._check_witness(evaluator, expression, result)
