"""
Unit tests for the validators, structural checks, exact oracle and solver manager.
"""
import pytest

from controllers.oracle_controller import OracleSolver
from controllers.solver_manager import SolverManager
from controllers.structure_controller import StructureAnalyzer
from controllers.validation_controller import ColoringValidator
from models.color_graph import ColorGraph, qr7
from models.digraph import ArcColoring, OrientedDigraph, VertexColoring
from models.errors import GeneratorParameterError, PartialColoringError, SizeCapExceededError
from models.solve_result import Method, Problem
from models.solver_config import SolverConfig


def _path(n: int) -> OrientedDigraph:
    vertices = tuple(f"v{i}" for i in range(1, n + 1))
    return OrientedDigraph(vertices, tuple(zip(vertices, vertices[1:])))


class TestColoringValidator:
    """Test oriented coloring validation."""

    def setup_method(self):
        """Setup test fixtures."""
        self.validator = ColoringValidator()

    def test_single_arc_valid(self, single_arc):
        """Test a two-colored arc."""
        assert self.validator.validate_vertex_coloring(single_arc, VertexColoring({"u": 1, "v": 2}, 2))

    def test_opposite_directions_between_classes(self, path3):
        """Test that arcs in both directions between two classes are reported."""
        report = self.validator.validate_vertex_coloring(path3, VertexColoring({"v1": 1, "v2": 2, "v3": 1}, 2))
        assert not report
        assert report.violation == (0, 1)

    def test_monochromatic_arc(self, single_arc):
        """Test that an arc inside one color class is reported."""
        report = self.validator.validate_vertex_coloring(single_arc, VertexColoring({"u": 1, "v": 1}, 1))
        assert not report.valid
        assert report.violation == (0,)

    def test_partial_coloring_is_an_error(self, path3):
        """Test that an uncolored vertex raises with its name."""
        with pytest.raises(PartialColoringError) as info:
            self.validator.validate_vertex_coloring(path3, VertexColoring({"v1": 1, "v2": 2}, 2))
        assert info.value.missing == "v3"

    def test_all_distinct_colors_are_valid(self, fixtures, evaluator):
        """Test that an injective coloring is always oriented."""
        graph = evaluator.evaluate(fixtures.fixture("X3")).graph
        coloring = VertexColoring({v: i for i, v in enumerate(graph.vertices, start=1)}, 7)
        assert self.validator.validate_vertex_coloring(graph, coloring)

    def test_homomorphism_into_color_graph(self, path3):
        """Test checking a coloring against a target color graph."""
        coloring = VertexColoring({"v1": 1, "v2": 2, "v3": 3}, 7)
        assert self.validator.validate_vertex_coloring(path3, coloring, qr7())
        # 2 -> 1 is not an arc of QR7
        backwards = VertexColoring({"v1": 2, "v2": 1, "v3": 2}, 7)
        assert not self.validator.validate_vertex_coloring(path3, backwards, qr7())

    def test_color_outside_color_graph(self, single_arc):
        """Test that a color missing from the target is reported."""
        report = self.validator.validate_vertex_coloring(
            single_arc, VertexColoring({"u": 1, "v": 3}, 3), ColorGraph.from_arcs([(1, 2)])
        )
        assert report.violation == ("v",)

    def test_arc_coloring_path(self, path3):
        """Test arc colorings of a two arc path."""
        assert self.validator.validate_arc_coloring(path3, ArcColoring({0: 1, 1: 2}, 2))
        report = self.validator.validate_arc_coloring(path3, ArcColoring({0: 1, 1: 1}, 1))
        assert not report
        assert report.violation == (0, 1)

    def test_arc_coloring_opposite_pairs(self):
        """Test that opposite color pairs on consecutive arcs are reported."""
        report = self.validator.validate_arc_coloring(_path(4), ArcColoring({0: 1, 1: 2, 2: 1}, 2))
        assert not report
        assert report.violation == (0, 1, 1, 2)

    def test_partial_arc_coloring(self, path3):
        """Test that an uncolored arc raises."""
        with pytest.raises(PartialColoringError):
            self.validator.validate_arc_coloring(path3, ArcColoring({0: 1}, 1))

    def test_realized_color_graph(self, path3):
        """Test the color graph realized by a coloring."""
        h = self.validator.realized_color_graph(path3, VertexColoring({"v1": 1, "v2": 2, "v3": 3}, 3))
        assert h.arc_list() == [(1, 2), (2, 3)]


class TestStructureAnalyzer:
    """Test isomorphism and undirected chromatic numbers."""

    def setup_method(self):
        """Setup test fixtures."""
        self.analyzer = StructureAnalyzer()

    def test_self_isomorphic(self, path3):
        """Test that a digraph is isomorphic to itself."""
        assert self.analyzer.isomorphic(path3, path3)

    def test_arc_vs_vertex(self, single_arc):
        """Test that an arc and a vertex are not isomorphic."""
        assert not self.analyzer.isomorphic(single_arc, OrientedDigraph(("x",)))

    def test_line_digraph_of_x1_is_x4(self, fixtures, evaluator):
        """Test that the line digraph of X1 is X4."""
        x1 = evaluator.evaluate(fixtures.fixture("X1")).graph
        x4 = evaluator.evaluate(fixtures.fixture("X4")).graph
        assert self.analyzer.isomorphic(x1.line_digraph(), x4)

    def test_direction_matters(self):
        """Test that arc multiplicities and directions are compared."""
        first = OrientedDigraph(("a", "b", "c"), (("a", "b"), ("a", "b"), ("b", "c")))
        second = OrientedDigraph(("a", "b", "c"), (("a", "b"), ("b", "c"), ("b", "c")))
        assert not self.analyzer.isomorphic(first, second)

    def test_isomorphism_cap(self, path3):
        """Test the isomorphism size cap."""
        analyzer = StructureAnalyzer(SolverConfig(isomorphism_cap=2))
        with pytest.raises(SizeCapExceededError):
            analyzer.isomorphic(path3, path3)

    def test_undirected_chromatic_number(self, single_arc, transitive_triangle):
        """Test undirected chromatic numbers of small digraphs."""
        assert self.analyzer.undirected_chromatic_number(single_arc) == 2
        assert self.analyzer.undirected_chromatic_number(transitive_triangle) == 3
        assert self.analyzer.undirected_chromatic_number(OrientedDigraph(("a", "b"))) == 1
        assert self.analyzer.undirected_chromatic_number(OrientedDigraph(())) == 0

    def test_series_parallel_needs_at_most_three(self, fixtures, evaluator):
        """Test that the fixtures are 3-colorable as undirected graphs."""
        for name in ("X1", "X2", "X3", "X4"):
            graph = evaluator.evaluate(fixtures.fixture(name)).graph
            assert self.analyzer.undirected_chromatic_number(graph) <= 3

    def test_undirected_cap(self, fixtures, evaluator):
        """Test the undirected coloring size cap."""
        graph = evaluator.evaluate(fixtures.fixture("X5")).graph
        with pytest.raises(SizeCapExceededError):
            self.analyzer.undirected_chromatic_number(graph)


class TestOracleSolver:
    """Test the exact oriented coloring search."""

    def setup_method(self):
        """Setup test fixtures."""
        self.oracle = OracleSolver()
        self.validator = ColoringValidator()

    @pytest.mark.parametrize("n,expected", [(2, 2), (3, 3), (4, 3), (6, 3)])
    def test_paths(self, n, expected):
        """Test chi_o of directed paths."""
        value, coloring = self.oracle.chi_o_exact(_path(n))
        assert value == expected
        assert self.validator.validate_vertex_coloring(_path(n), coloring)

    def test_triangles(self, transitive_triangle, directed_triangle):
        """Test chi_o of both triangles."""
        assert self.oracle.chi_o_exact(transitive_triangle)[0] == 3
        assert self.oracle.chi_o_exact(directed_triangle)[0] == 3

    def test_degenerate_graphs(self):
        """Test the empty digraph and an arcless digraph."""
        assert self.oracle.chi_o_exact(OrientedDigraph(()))[0] == 0
        assert self.oracle.chi_o_exact(OrientedDigraph(("a", "b", "c")))[0] == 1

    def test_x3(self, fixtures, evaluator):
        """Test that X3 needs seven colors."""
        graph = evaluator.evaluate(fixtures.fixture("X3")).graph
        value, coloring = self.oracle.chi_o_exact(graph)
        assert value == 7
        assert self.validator.validate_vertex_coloring(graph, coloring)

    def test_index(self, single_arc, path3):
        """Test chi'_o of an arc and a two arc path."""
        assert self.oracle.chi_o_index_exact(single_arc)[0] == 1
        value, coloring = self.oracle.chi_o_index_exact(path3)
        assert value == 2
        assert self.validator.validate_arc_coloring(path3, coloring)

    def test_index_of_arcless_graph(self):
        """Test chi'_o of a digraph without arcs."""
        value, coloring = self.oracle.chi_o_index_exact(OrientedDigraph(("a",)))
        assert value == 0
        assert coloring.colors == {}

    def test_vertex_cap(self):
        """Test the vertex cap of the oracle."""
        with pytest.raises(SizeCapExceededError):
            self.oracle.chi_o_exact(OrientedDigraph(tuple(range(31))))

    def test_is_colorable(self, path3):
        """Test the r-colorability decision."""
        assert not self.oracle.is_colorable(path3, 2)
        assert self.oracle.is_colorable(path3, 3)

    def test_solve_returns_result(self, path3):
        """Test the result records of the oracle."""
        result = self.oracle.solve(path3)
        assert result.problem is Problem.OCN
        assert result.method is Method.ORACLE
        assert result.value == 3
        assert result.vertex_count == 3
        assert self.oracle.solve_index(path3).problem is Problem.OCI

    @pytest.mark.slow
    def test_x5(self, fixtures, evaluator):
        """Test that X5 needs seven colors."""
        graph = evaluator.evaluate(fixtures.fixture("X5")).graph
        value, coloring = self.oracle.chi_o_exact(graph)
        assert value == 7
        assert self.validator.validate_vertex_coloring(graph, coloring)

    @pytest.mark.slow
    def test_x2_index(self, fixtures, evaluator):
        """Test that X2 needs seven arc colors."""
        graph = evaluator.evaluate(fixtures.fixture("X2")).graph
        value, coloring = self.oracle.chi_o_index_exact(graph)
        assert value == 7
        assert self.validator.validate_arc_coloring(graph, coloring)


class TestSolverManager:
    """Test routing between the dynamic programs and the oracle."""

    def setup_method(self):
        """Setup test fixtures."""
        self.manager = SolverManager()

    def test_manager_initialization(self):
        """Test manager initialization."""
        assert self.manager.history == []
        assert self.manager.logger is not None

    def test_chi_o_esp_uses_dynamic_program(self, fixtures):
        """Test that esp chi_o goes to the dynamic program."""
        result = self.manager.chi_o(fixtures.fixture("X3"))
        assert result.value == 7
        assert result.method is Method.DYNAMIC_PROGRAM

    def test_chi_o_msp_uses_dynamic_program(self, fixtures, evaluator, oracle):
        """Test that msp chi_o comes from the vertex coloring DP and matches the oracle."""
        result = self.manager.chi_o(fixtures.fixture("X4"))
        assert result.method is Method.DYNAMIC_PROGRAM
        graph = evaluator.evaluate(fixtures.fixture("X4")).graph
        assert result.value == oracle.chi_o_exact(graph)[0]

    def test_chi_o_index_routes(self, fixtures):
        """Test that both flavors of chi'_o go to a dynamic program."""
        msp = self.manager.chi_o_index(fixtures.fixture("X4"))
        assert msp.method is Method.DYNAMIC_PROGRAM
        esp = self.manager.chi_o_index(fixtures.fixture("X1"))
        assert esp.method is Method.DYNAMIC_PROGRAM
        assert esp.problem is Problem.OCI
        # LD(g(X1)) is isomorphic to g(X4)
        assert esp.value == self.manager.chi_o(fixtures.fixture("X4")).value

    def test_chi_o_index_esp_above_oracle_cap(self, generator, evaluator, validator):
        """Test chi'_o of a 40 vertex esp path, past the oracle's size cap."""
        expression = generator.esp_path(40)
        result = self.manager.chi_o_index(expression)
        graph = evaluator.evaluate(expression).graph
        assert result.value == 3
        assert set(result.coloring.colors) == set(range(graph.arc_count))
        assert validator.validate_arc_coloring(graph, result.coloring)

    @pytest.mark.slow
    def test_chi_o_index_esp_x2(self, fixtures, evaluator, validator):
        """Test that the esp fixture X2 needs seven arc colors."""
        expression = fixtures.fixture("X2")
        result = self.manager.chi_o_index(expression)
        assert result.value == 7
        assert validator.validate_arc_coloring(evaluator.evaluate(expression).graph, result.coloring)

    def test_chi_o_index_graph_recognizes_esp(self, validator):
        """Test a raw esp digraph with integer ids and parallel arcs going through recognition."""
        arcs = tuple((i, i + 1) for i in range(45)) + ((0, 1), (20, 21))
        graph = OrientedDigraph(tuple(range(46)), arcs)
        result = self.manager.chi_o_index_graph(graph)
        assert result.method is Method.DYNAMIC_PROGRAM
        assert result.value == 3
        assert validator.validate_arc_coloring(graph, result.coloring)

    def test_chi_o_index_graph_falls_back_to_oracle(self, directed_triangle):
        """Test that a digraph that is not esp goes to the exact oracle."""
        result = self.manager.chi_o_index_graph(directed_triangle)
        assert result.method is Method.ORACLE
        assert result.value == 3

    def test_verify(self, fixtures, evaluator):
        """Test re-checking the witnesses of stored results."""
        expression = fixtures.fixture("X4")
        graph = evaluator.evaluate(expression).graph
        assert self.manager.verify(graph, self.manager.chi_o_index(expression))
        assert self.manager.verify(graph, self.manager.chi_o_exact(graph))

    def test_summary(self, path3):
        """Test the per problem and method counts."""
        self.manager.chi_o_exact(path3)
        self.manager.chi_o_index_exact(path3)
        self.manager.chi_o_exact(path3)
        assert self.manager.get_summary() == {"ocn/oracle": 2, "oci/oracle": 1}

    def test_bench_rows(self):
        """Test the rows and ratios of an esp bench."""
        table = self.manager.bench_linear("esp_path", [10, 20])
        assert [row.size for row in table.rows] == [10, 20]
        assert [row.value for row in table.rows] == [3, 3]
        assert table.rows[0].ratio is None
        assert table.rows[1].ratio is not None

    def test_bench_msp_chain(self):
        """Test an msp chain bench."""
        table = self.manager.bench_linear("msp_chain", [5])
        assert table.rows[0].value == 3

    def test_bench_empty(self):
        """Test a bench without sizes."""
        assert self.manager.bench_linear("esp_path", []).is_empty

    def test_bench_rejects_bad_input(self):
        """Test that unsorted sizes and unknown generators are rejected."""
        with pytest.raises(GeneratorParameterError):
            self.manager.bench_linear("esp_path", [20, 10])
        with pytest.raises(GeneratorParameterError):
            self.manager.bench_linear("tree", [10])
