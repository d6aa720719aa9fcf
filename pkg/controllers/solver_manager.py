"""
Solver manager: routes expressions and digraphs to the right solver.
"""
import logging
from collections import deque
from dataclasses import replace
from typing import Callable, Deque, Dict, List, Optional, Sequence, Tuple

from controllers.esp_ocn_controller import EspOcnSolver
from controllers.expression_controller import EspRecognizer, ExpressionEvaluator
from controllers.msp_ocn_controller import MspOcnSolver
from controllers.msp_oci_controller import MspOciSolver
from controllers.oracle_controller import OracleSolver
from controllers.structure_controller import StructureAnalyzer
from controllers.validation_controller import ColoringValidator
from models.digraph import ArcColoring, OrientedDigraph
from models.errors import GeneratorParameterError
from models.expression import Flavor, NotEsp, SpExpression
from models.solve_result import BenchRow, BenchTable, ChromaticResult, Problem
from models.solver_config import BENCH_GENERATORS, SolverConfig
from services.fixture_service import ExpressionGenerator


class SolverManager:
    """Owns one instance of every solver and keeps a history of results.

    Every expression goes to a dynamic program: the esp and msp vertex coloring
    programs for chi_o, the msp arc coloring program for chi'_o of msp and the
    msp vertex coloring program on the line expression for chi'_o of esp. Raw
    digraphs go to the exact oracle.
    """

    def __init__(self, config: Optional[SolverConfig] = None):
        """Initialize solver manager."""
        self.config = config or SolverConfig()
        self.logger = logging.getLogger(self.__class__.__name__)
        self.evaluator = ExpressionEvaluator(self.config)
        self.analyzer = StructureAnalyzer(self.config)
        self.validator = ColoringValidator()
        self.recognizer = EspRecognizer()
        self.generator = ExpressionGenerator()
        self.esp_solver = EspOcnSolver(self.config, self.evaluator)
        self.msp_solver = MspOciSolver(self.config, self.evaluator)
        self.msp_number_solver = MspOcnSolver(self.config, self.evaluator)
        self.oracle = OracleSolver(self.config, self.analyzer)
        self.history: List[ChromaticResult] = []

    def chi_o(self, expression: SpExpression) -> ChromaticResult:
        """Oriented chromatic number by the dynamic program of the expression's flavor."""
        if expression.flavor is Flavor.ESP:
            result = self.esp_solver.solve(expression)
        else:
            result = self.msp_number_solver.solve(expression)
        return self._record(result)

    def chi_o_index(self, expression: SpExpression) -> ChromaticResult:
        """Oriented chromatic index: arc coloring DP for msp, chi_o of the line digraph for esp."""
        if expression.flavor is Flavor.MSP:
            result = self.msp_solver.solve(expression)
        else:
            result = self.msp_number_solver.solve_esp_index(expression)
        return self._record(result)

    def chi_o_exact(self, graph: OrientedDigraph) -> ChromaticResult:
        return self._record(self.oracle.solve(graph))

    def chi_o_index_exact(self, graph: OrientedDigraph) -> ChromaticResult:
        return self._record(self.oracle.solve_index(graph))

    def chi_o_index_graph(self, graph: OrientedDigraph) -> ChromaticResult:
        """chi'_o of a raw digraph: esp recognition first, the exact oracle otherwise.

        The witness of a recognized digraph is mapped back onto the arc ids of
        ``graph``; parallel arcs are matched in order.
        """
        outcome = self.recognizer.recognize_esp(graph)
        if isinstance(outcome, NotEsp):
            self.logger.info(f"Not esp ({outcome.reason}), using the exact oracle")
            return self.chi_o_index_exact(graph)
        result = self.msp_number_solver.solve_esp_index(outcome)
        ids: Dict[Tuple[str, str], Deque[int]] = {}
        for arc_id, arc in enumerate(self.evaluator.evaluate(outcome).graph.arcs):
            ids.setdefault(arc, deque()).append(arc_id)
        colors = {arc_id: result.coloring[ids[(str(tail), str(head))].popleft()]
                  for arc_id, (tail, head) in enumerate(graph.arcs)}
        return self._record(replace(result, coloring=ArcColoring(colors, result.coloring.r)))

    def verify(self, graph: OrientedDigraph, result: ChromaticResult) -> bool:
        """Re-check the witness of ``result`` on ``graph``."""
        if result.coloring is None:
            return False
        if result.problem is Problem.OCN:
            return self.validator.validate_vertex_coloring(graph, result.coloring).valid
        if graph.arc_count == 0:
            return result.value == 0
        return self.validator.validate_arc_coloring(graph, result.coloring).valid

    def bench_linear(self, generator: str, sizes: Sequence[int]) -> BenchTable:
        """Wall time of the dynamic program on growing chains.

        ``esp_path`` times chi_o on directed paths given as esp expressions;
        ``msp_chain`` times chi'_o on v1 * v2 * ... * vn. The ratio column is
        the time of a row divided by the time of the previous row.
        """
        if generator not in BENCH_GENERATORS:
            raise GeneratorParameterError(
                f"Unknown bench generator {generator!r}; expected one of {', '.join(BENCH_GENERATORS)}"
            )
        if list(sizes) != sorted(sizes):
            raise GeneratorParameterError("Bench sizes must be ascending")
        build: Dict[str, Callable[[int], SpExpression]] = {
            'esp_path': self.generator.esp_path,
            'msp_chain': self.generator.msp_chain,
        }
        solver = self.esp_solver if generator == 'esp_path' else self.msp_solver

        table = BenchTable(generator)
        previous: Optional[float] = None
        for size in sizes:
            expression = build[generator](size)
            result = solver.solve(expression, witness=False)
            seconds = result.elapsed_seconds
            ratio = seconds / previous if previous else None
            table.rows.append(BenchRow(size, seconds, result.value, ratio))
            self.logger.info(f"bench {generator} n={size}: {seconds:.3f}s value={result.value}")
            previous = seconds
        return table

    def get_summary(self) -> Dict[str, int]:
        """Count of computed results per problem and method."""
        summary: Dict[str, int] = {}
        for result in self.history:
            key = f"{result.problem.value}/{result.method.value}"
            summary[key] = summary.get(key, 0) + 1
        return summary

    def _record(self, result: ChromaticResult) -> ChromaticResult:
        self.history.append(result)
        return result
