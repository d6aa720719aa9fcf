"""
View classes for solver output and benchmark reports.
"""
import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

from models.digraph import OrientedDigraph
from models.expression import NotEsp, SpExpression
from models.solve_result import BenchTable, ChromaticResult
from models.solver_config import OutputFormat
from services.export_service import ExportService


class ColoringView:
    """Prints results on stdout and diagnostics on stderr.

    Nothing written to stdout depends on the clock, so the same input always
    produces the same bytes.
    """

    def __init__(self, verbose: bool = False, stream: Optional[TextIO] = None,
                 exporter: Optional[ExportService] = None):
        """Initialize coloring view."""
        self.verbose = verbose
        self.stream = stream
        self.exporter = exporter or ExportService()
        self.logger = logging.getLogger(self.__class__.__name__)

    def _out(self, text: str = ""):
        if self.stream is None:
            print(text)
        else:
            print(text, file=self.stream)

    def display_text(self, text: str):
        """Print an already formatted document, without doubling its final newline."""
        self._out(text[:-1] if text.endswith("\n") else text)

    def display_expression(self, expression: SpExpression):
        self._out(str(expression))

    def display_graph(self, graph: OrientedDigraph, format: OutputFormat = OutputFormat.TEXT):
        """Digraph as text listing, JSON document or DOT."""
        if format is OutputFormat.JSON:
            self.display_text(self.exporter.digraph_to_json(graph))
        elif format is OutputFormat.DOT:
            self.display_text(self.exporter.digraph_to_dot(graph))
        else:
            self._out(f"vertices {graph.vertex_count}: {' '.join(str(v) for v in graph.vertices)}")
            self._out(f"arcs {graph.arc_count}:")
            for arc_id, (tail, head) in enumerate(graph.arcs):
                self._out(f"  {arc_id}: {tail} -> {head}")

    def display_result(self, result: ChromaticResult, witness: bool = False,
                       format: OutputFormat = OutputFormat.TEXT):
        """The value first; with ``witness`` the coloring and its color graph follow."""
        if format is OutputFormat.JSON:
            self.display_text(json.dumps(result.to_dict(include_witness=witness), indent=2))
            return
        if format is OutputFormat.DOT:
            if result.color_graph is not None:
                self.display_text(self.exporter.color_graph_to_dot(result.color_graph))
            return
        self._out(str(result.value))
        if witness and result.coloring is not None:
            for key, color in result.coloring.colors.items():
                self._out(f"{key} {color}")
        if witness and result.color_graph is not None:
            arcs = ' '.join(f"{tail}->{head}" for tail, head in result.color_graph.arc_list())
            self._out(f"color graph: {arcs}")
        if self.verbose:
            self.logger.info(f"{result.problem.value} by {result.method.value}: {result.value}")

    def display_recognition(self, outcome: Union[SpExpression, NotEsp]):
        if isinstance(outcome, NotEsp):
            self._out(f"not esp: {outcome.reason}")
        else:
            self._out(str(outcome))

    def display_fixtures(self, names: Iterable[str], flavors: Optional[dict] = None):
        for name in names:
            flavor = flavors.get(name) if flavors else None
            self._out(f"{name} {flavor.value}" if flavor is not None else name)

    def display_error(self, error_message: str, context: str = ""):
        """Display error message on stderr."""
        suffix = f" ({context})" if context else ""
        print(f"error: {error_message}{suffix}", file=sys.stderr)

    def display_warning(self, message: str):
        print(f"warning: {message}", file=sys.stderr)

    def display_info(self, message: str):
        """Display info message on stderr when verbose."""
        if self.verbose:
            timestamp = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
            print(f"[{timestamp}] {message}", file=sys.stderr)


class BenchReportView:
    """Formats linear-scaling tables."""

    def __init__(self):
        """Initialize bench report view."""
        self.logger = logging.getLogger(self.__class__.__name__)

    def format_table(self, table: BenchTable) -> str:
        """Fixed-width table: size, seconds, value, ratio to the previous row."""
        report = [f"BENCH {table.generator}"]
        report.append(f"{'size':>10} {'seconds':>12} {'value':>6} {'ratio':>8}")
        report.append("-" * 39)
        for row in table.rows:
            ratio = f"{row.ratio:.2f}" if row.ratio is not None else "-"
            report.append(f"{row.size:>10} {row.seconds:>12.4f} {row.value:>6} {ratio:>8}")
        if table.is_empty:
            report.append("(no sizes)")
        return "\n".join(report) + "\n"

    def save_report(self, report: str, file_path: str) -> bool:
        """Save report to file."""
        try:
            Path(file_path).parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8') as f:
                f.write(report)
            self.logger.info(f"Report saved to: {file_path}")
            return True
        except OSError as e:
            self.logger.error(f"Failed to save report: {e}")
            return False
