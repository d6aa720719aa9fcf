"""
Main application entry point for the series-parallel coloring tool.

Computes oriented chromatic numbers and oriented chromatic indices of
series-parallel digraphs given as decomposition expressions.

Features:
- Linear-time dynamic programs for esp vertex colorings and msp arc colorings
- Exact backtracking oracle for arbitrary small oriented digraphs
- Constructive 7-coloring of esp digraphs through the QR7 tournament
- Recognition of esp digraphs from JSON arc lists
- DIMACS CNF and LP encodings of the decision problems
- Bundled example fixtures and a linear-scaling benchmark
"""
import argparse
import logging
import random
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import yaml

# Add the parent directory to the path so we can import our modules
sys.path.insert(0, str(Path(__file__).parent))

from config_loader import ConfigLoader
from controllers.solver_manager import SolverManager
from models.digraph import OrientedDigraph
from models.errors import SpColoringError, UsageError
from models.expression import Flavor, NotEsp, SpExpression
from models.solve_result import ChromaticResult, Problem
from models.solver_config import BenchConfig, OutputFormat
from services.encoding_service import EncodingFormat, EncodingService
from services.export_service import ExportService
from services.expression_parser import ExpressionParser
from services.fixture_service import FixtureService
from views.coloring_view import BenchReportView, ColoringView

COMMANDS = (
    'parse', 'eval', 'chi-o', 'chi-o-index', 'chi-o-exact', 'chi-o-index-exact',
    'color-qr7', 'recognize-esp', 'emit-cnf', 'emit-lp', 'bench', 'fixtures',
)
GRAPH_COMMANDS = ('chi-o-exact', 'chi-o-index-exact', 'recognize-esp', 'emit-cnf', 'emit-lp')


class SpColoringApp:
    """Main application class for the coloring tool."""

    def __init__(self, config_file: Optional[str] = None):
        """Initialize the application."""
        self.config_file = config_file
        self.load_config(config_file)
        self.setup_logging()
        self.logger = logging.getLogger(self.__class__.__name__)

        self.parser = ExpressionParser()
        self.fixtures = FixtureService(parser=self.parser)
        self.exporter = ExportService()
        self._build_components()
        self.report_view = BenchReportView()

        self.logger.info("Coloring application initialized")

    def load_config(self, config_file: Optional[str] = None):
        """Load configuration from environment variables and config file."""
        loader = ConfigLoader(config_file)
        self.solver_config = loader.load_solver_config()
        self.bench_config = loader.load_bench_config()
        self.output_config = loader.load_output_config()
        self.logging_config = loader.load_logging_config()

    def setup_logging(self):
        """Setup logging configuration."""
        log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        if self.logging_config.file:
            Path(self.logging_config.file).parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(self.logging_config.file))

        logging.basicConfig(
            level=getattr(logging, self.logging_config.level),
            format=log_format,
            handlers=handlers,
            force=True,
        )

    def _build_components(self):
        self.manager = SolverManager(self.solver_config)
        self.encoder = EncodingService(self.solver_config)
        self.view = ColoringView(verbose=self.output_config.verbose, exporter=self.exporter)

    def apply_flags(self, args: argparse.Namespace):
        """Command line flags override the file and environment settings."""
        if getattr(args, 'prune', None) is not None:
            self.solver_config = replace(self.solver_config, prune=args.prune == 'on')
        output = self.output_config
        if getattr(args, 'out', None):
            output = replace(output, format=OutputFormat(args.out))
        if getattr(args, 'witness', False):
            output = replace(output, witness=True)
        if getattr(args, 'seed', None) is not None:
            output = replace(output, seed=args.seed)
        if getattr(args, 'verbose', False):
            output = replace(output, verbose=True)
        self.output_config = output
        self._build_components()

    # inputs

    def load_expression(self, args: argparse.Namespace) -> SpExpression:
        """The expression named by exactly one of --expr, --file, --fixture, --random."""
        sources = [name for name in ('expr', 'file', 'fixture', 'random')
                   if getattr(args, name, None) is not None]
        if len(sources) != 1:
            raise UsageError("Give exactly one of --expr, --file, --fixture, --random")
        flavor = Flavor.parse(args.flavor) if args.flavor else None

        if args.expr is not None:
            if flavor is None:
                raise UsageError("--expr needs --flavor")
            return self.parser.parse(args.expr, flavor)
        if args.file is not None:
            return self.parser.parse_file(args.file, flavor)
        if args.fixture is not None:
            return self.parser.parse_document(self.fixtures.fixture_text(args.fixture), flavor)
        if flavor is None:
            raise UsageError("--random needs --flavor")
        rng = random.Random(self.output_config.seed)
        return self.manager.generator.random_expression(flavor, args.random, rng)

    def load_graph(self, args: argparse.Namespace) -> OrientedDigraph:
        """The --graph JSON file, or the evaluation of the given expression."""
        if getattr(args, 'graph', None) is not None:
            return self.exporter.load_digraph_json(Path(args.graph))
        return self.manager.evaluator.evaluate(self.load_expression(args)).graph

    def _esp_expression(self, args: argparse.Namespace) -> Optional[SpExpression]:
        """The input as an esp expression; a --graph input goes through recognition."""
        if getattr(args, 'graph', None) is None:
            return self.load_expression(args)
        outcome = self.manager.recognizer.recognize_esp(self.load_graph(args))
        if isinstance(outcome, NotEsp):
            self.logger.info(f"Input is not esp: {outcome.reason}")
            return None
        return outcome

    # commands

    def cmd_parse(self, args: argparse.Namespace) -> int:
        self.view.display_expression(self.load_expression(args))
        return 0

    def cmd_eval(self, args: argparse.Namespace) -> int:
        self.view.display_graph(self.load_graph(args), self.output_config.format)
        return 0

    def cmd_chi_o(self, args: argparse.Namespace) -> int:
        if args.graph is None:
            expression = self.load_expression(args)
            result = self.manager.chi_o(expression)
            graph = self.manager.evaluator.evaluate(expression).graph
        else:
            graph = self.load_graph(args)
            outcome = self.manager.recognizer.recognize_esp(graph)
            if isinstance(outcome, NotEsp):
                self.view.display_info(f"not esp ({outcome.reason}), using the exact oracle")
                result = self.manager.chi_o_exact(graph)
            else:
                result = self.manager.chi_o(outcome)
        self._show(graph, result)
        return 0

    def cmd_chi_o_index(self, args: argparse.Namespace) -> int:
        if args.graph is None:
            expression = self.load_expression(args)
            result = self.manager.chi_o_index(expression)
            graph = self.manager.evaluator.evaluate(expression).graph
        else:
            graph = self.load_graph(args)
            result = self.manager.chi_o_index_graph(graph)
        self._show(graph, result)
        return 0

    def cmd_chi_o_exact(self, args: argparse.Namespace) -> int:
        graph = self.load_graph(args)
        self._show(graph, self.manager.chi_o_exact(graph))
        return 0

    def cmd_chi_o_index_exact(self, args: argparse.Namespace) -> int:
        graph = self.load_graph(args)
        self._show(graph, self.manager.chi_o_index_exact(graph))
        return 0

    def cmd_color_qr7(self, args: argparse.Namespace) -> int:
        expression = self._esp_expression(args)
        if expression is None:
            raise UsageError("color-qr7 needs an esp digraph")
        evaluation = self.manager.evaluator.evaluate(expression)
        coloring = self.manager.esp_solver.color_esp_qr7(expression, evaluation)
        if self.output_config.format is OutputFormat.DOT:
            self.view.display_text(self.exporter.digraph_to_dot(evaluation.graph, vertex_coloring=coloring))
        elif self.output_config.format is OutputFormat.JSON:
            self.view.display_text(self.exporter.coloring_to_json(coloring))
        else:
            for vertex, color in coloring.colors.items():
                self.view.display_text(f"{vertex} {color}")
        return 0

    def cmd_recognize_esp(self, args: argparse.Namespace) -> int:
        self.view.display_recognition(self.manager.recognizer.recognize_esp(self.load_graph(args)))
        return 0

    def cmd_emit(self, args: argparse.Namespace, format: EncodingFormat) -> int:
        if args.r is None:
            raise UsageError(f"emit-{format.value} needs --r")
        graph = self.load_graph(args)
        if args.problem == 'oci':
            document = self.encoder.emit_oci_decision(graph, args.r, format)
        else:
            document = self.encoder.emit_ocn_decision(graph, args.r, format)
        if args.save:
            self.exporter.save(document, args.save)
        self.view.display_text(document)
        return 0

    def cmd_bench(self, args: argparse.Namespace) -> int:
        bench = self.bench_config
        if args.generator is not None or args.sizes is not None:
            bench = BenchConfig(
                generator=args.generator or bench.generator,
                sizes=args.sizes if args.sizes is not None else bench.sizes,
            )
        table = self.manager.bench_linear(bench.generator, bench.sizes)
        report = self.report_view.format_table(table)
        if args.save and not self.report_view.save_report(report, args.save):
            self.view.display_warning(f"could not save report to {args.save}")
        self.view.display_text(report)
        return 0

    def cmd_fixtures(self, args: argparse.Namespace) -> int:
        names = self.fixtures.list_fixtures()
        flavors = {name: self.fixtures.fixture_flavor(name) for name in names}
        self.view.display_fixtures(names, flavors)
        return 0

    def list_fixtures(self) -> int:
        self.view.display_fixtures(self.fixtures.list_fixtures())
        return 0

    def _show(self, graph: OrientedDigraph, result: ChromaticResult):
        if (self.output_config.format is OutputFormat.DOT and result.color_graph is None
                and result.coloring is not None and 0 < result.value <= 7):
            coloring = result.coloring
            target = graph
            if result.problem is Problem.OCI:
                target, coloring = graph.line_digraph(), coloring.as_vertex_coloring()
            result = replace(result, color_graph=self.manager.validator.realized_color_graph(target, coloring))
        self.view.display_result(result, self.output_config.witness, self.output_config.format)

    def dispatch(self, args: argparse.Namespace) -> int:
        handlers = {
            'parse': self.cmd_parse,
            'eval': self.cmd_eval,
            'chi-o': self.cmd_chi_o,
            'chi-o-index': self.cmd_chi_o_index,
            'chi-o-exact': self.cmd_chi_o_exact,
            'chi-o-index-exact': self.cmd_chi_o_index_exact,
            'color-qr7': self.cmd_color_qr7,
            'recognize-esp': self.cmd_recognize_esp,
            'emit-cnf': lambda a: self.cmd_emit(a, EncodingFormat.CNF),
            'emit-lp': lambda a: self.cmd_emit(a, EncodingFormat.LP),
            'bench': self.cmd_bench,
            'fixtures': self.cmd_fixtures,
        }
        code = handlers[args.command](args)
        summary = self.manager.get_summary()
        if summary:
            counts = ", ".join(f"{key}={count}" for key, count in sorted(summary.items()))
            self.logger.info(f"Results computed: {counts}")
        return code


def _sizes(text: str) -> List[int]:
    """Comma separated sizes; an empty string is an empty list."""
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid size list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='spcoloring',
        description='Oriented colorings of series-parallel digraphs',
    )
    parser.add_argument('--config', default=None, help='Configuration file path (YAML)')
    parser.add_argument('--list-fixtures', action='store_true', help='List bundled fixture names')
    parser.add_argument('--verbose', '-v', action='store_true', help='Verbose output')

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument('--flavor', choices=[f.value for f in Flavor], help='Expression flavor')
    inputs.add_argument('--expr', help='Expression text')
    inputs.add_argument('--file', help='Expression file')
    inputs.add_argument('--fixture', help='Bundled fixture name (X1..X6)')
    inputs.add_argument('--random', type=int, metavar='N', help='Random expression with N leaves')
    inputs.add_argument('--seed', type=int, help='Seed for --random (default 0)')

    options = argparse.ArgumentParser(add_help=False)
    options.add_argument('--out', choices=[f.value for f in OutputFormat], help='Output format')
    options.add_argument('--witness', action='store_true', help='Print the witness coloring')
    options.add_argument('--prune', choices=['on', 'off'], help='Dominance pruning of DP states')

    graph_input = argparse.ArgumentParser(add_help=False)
    graph_input.add_argument('--graph', help='Digraph JSON file')

    sub = parser.add_subparsers(dest='command')
    sub.add_parser('parse', parents=[inputs], help='Parse and print an expression')
    sub.add_parser('eval', parents=[inputs, graph_input, options], help='Evaluate an expression to a digraph')
    for name, text in (('chi-o', 'Oriented chromatic number'),
                       ('chi-o-index', 'Oriented chromatic index'),
                       ('chi-o-exact', 'Oriented chromatic number by exhaustive search'),
                       ('chi-o-index-exact', 'Oriented chromatic index by exhaustive search'),
                       ('color-qr7', 'Oriented 7-coloring of an esp digraph')):
        sub.add_parser(name, parents=[inputs, graph_input, options], help=text)
    sub.add_parser('recognize-esp', parents=[inputs, graph_input], help='Recognize an esp digraph')
    for name in ('emit-cnf', 'emit-lp'):
        emit = sub.add_parser(name, parents=[inputs, graph_input], help=f'Emit the {name[5:].upper()} decision encoding')
        emit.add_argument('--r', type=int, help='Number of colors')
        emit.add_argument('--problem', choices=[p.value for p in Problem], default='ocn')
        emit.add_argument('--save', help='Also write the document to this file')
    bench = sub.add_parser('bench', help='Linear scaling benchmark')
    bench.add_argument('--generator', choices=['esp_path', 'msp_chain'])
    bench.add_argument('--sizes', type=_sizes, help='Comma separated ascending sizes')
    bench.add_argument('--save', help='Also write the table to this file')
    sub.add_parser('fixtures', help='List bundled fixtures with their flavor')
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Run the command line and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    view = ColoringView()
    try:
        app = SpColoringApp(args.config)
        app.apply_flags(args)
        if args.list_fixtures:
            return app.list_fixtures()
        if args.command is None:
            parser.print_help(sys.stderr)
            return 2
        return app.dispatch(args)

    except UsageError as e:
        view.display_error(str(e))
        return 2
    except KeyboardInterrupt:
        print("Operation cancelled by user", file=sys.stderr)
        return 1
    except (SpColoringError, OSError, yaml.YAMLError) as e:
        view.display_error(str(e))
        return 1


def main():
    """Main entry point."""
    sys.exit(run())


if __name__ == '__main__':
    main()
