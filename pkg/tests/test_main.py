"""
Tests for the command line application.
"""
import json
import os
from pathlib import Path
from unittest.mock import patch

import pytest

from main import SpColoringApp, build_parser, run


def _write_graph(directory: str, vertices, arcs) -> str:
    path = Path(directory) / "graph.json"
    path.write_text(json.dumps({'vertices': list(vertices), 'arcs': [list(a) for a in arcs]}))
    return str(path)


class TestSpColoringApp:
    """Test application wiring."""

    def test_app_initialization(self):
        """Test application initialization."""
        app = SpColoringApp()

        assert app.manager is not None
        assert app.encoder is not None
        assert app.view is not None
        assert app.report_view is not None
        assert app.logger is not None
        assert app.solver_config.prune is False

    def test_flags_override_configuration(self):
        """Test that command line flags override the loaded configuration."""
        app = SpColoringApp()
        args = build_parser().parse_args(["chi-o", "--fixture", "X1", "--prune", "on", "--out", "json", "--witness"])

        app.apply_flags(args)

        assert app.solver_config.prune is True
        assert app.manager.config.prune is True
        assert app.output_config.format.value == "json"
        assert app.output_config.witness is True

    def test_environment_configuration(self):
        """Test configuration from environment variables."""
        with patch.dict(os.environ, {'SPCOLOR_PRUNE': 'on', 'SPCOLOR_SEED': '9'}):
            app = SpColoringApp()
        assert app.solver_config.prune is True
        assert app.output_config.seed == 9


class TestCommandLine:
    """Exit codes and stdout of the subcommands."""

    def test_cli_chi_o_fixture(self, capsys):
        """Test chi_o of a fixture."""
        assert run(["chi-o", "--flavor", "esp", "--fixture", "X3"]) == 0
        assert capsys.readouterr().out == "7\n"

    def test_cli_chi_o_witness(self, capsys):
        """Test printing the witness and the color graph."""
        assert run(["chi-o", "--flavor", "esp", "--expr", "a->b", "--witness"]) == 0
        assert capsys.readouterr().out == "2\na 1\nb 2\ncolor graph: 1->2\n"

    def test_cli_chi_o_index(self, capsys):
        """Test chi'_o of an msp expression."""
        assert run(["chi-o-index", "--flavor", "msp", "--expr", "a * b * c"]) == 0
        assert capsys.readouterr().out == "2\n"

    def test_cli_chi_o_index_of_esp_uses_line_digraph(self, capsys):
        """Test that chi'_o of X1 equals chi_o of X4."""
        assert run(["chi-o-index", "--fixture", "X1"]) == 0
        first = capsys.readouterr().out
        assert run(["chi-o", "--fixture", "X4"]) == 0
        assert capsys.readouterr().out == first

    def test_cli_output_is_deterministic(self, capsys):
        """Test that two runs print the same JSON."""
        argv = ["chi-o", "--fixture", "X1", "--witness", "--out", "json"]
        assert run(argv) == 0
        first = capsys.readouterr().out
        assert run(argv) == 0
        assert capsys.readouterr().out == first
        assert json.loads(first)['problem'] == "ocn"

    def test_cli_dot_output(self, capsys):
        """Test DOT output of the color graph."""
        assert run(["chi-o-exact", "--fixture", "X3", "--out", "dot"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("digraph H {")
        assert '"7";' in out

    def test_cli_parse(self, capsys):
        """Test canonical printing of a parsed expression."""
        assert run(["parse", "--flavor", "esp", "--expr", "(a->b * b->c) + a->c"]) == 0
        assert capsys.readouterr().out == "a->b * b->c + a->c\n"

    def test_cli_parse_random_is_seeded(self, capsys):
        """Test that a seeded random expression is reproducible."""
        argv = ["parse", "--flavor", "msp", "--random", "8", "--seed", "4"]
        assert run(argv) == 0
        first = capsys.readouterr().out
        assert run(argv) == 0
        assert capsys.readouterr().out == first

    def test_cli_parse_file(self, capsys, temp_dir):
        """Test parsing an expression file with a flavor header."""
        path = Path(temp_dir) / "e.sp"
        path.write_text("# flavor: msp\nx * (y + z)\n")
        assert run(["parse", "--file", str(path)]) == 0
        assert capsys.readouterr().out == "x * (y + z)\n"

    def test_cli_eval_json(self, capsys):
        """Test the JSON listing of an evaluated fixture."""
        assert run(["eval", "--fixture", "X4", "--out", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert len(data['vertices']) == 6
        assert len(data['arcs']) == 6

    def test_cli_color_qr7(self, capsys):
        """Test the QR7 coloring of a path."""
        assert run(["color-qr7", "--flavor", "esp", "--expr", "v1->v2 * v2->v3"]) == 0
        assert capsys.readouterr().out == "v1 1\nv2 5\nv3 2\n"

    def test_cli_graph_input(self, capsys, temp_dir):
        """Test digraph files on the graph subcommands."""
        path = _write_graph(temp_dir, ["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert run(["chi-o", "--graph", path]) == 0
        assert run(["chi-o-exact", "--graph", path]) == 0
        assert run(["chi-o-index-exact", "--graph", path]) == 0
        assert capsys.readouterr().out == "3\n3\n2\n"

    def test_cli_non_esp_graph_falls_back_to_oracle(self, capsys, temp_dir):
        """Test that a digraph that is not esp goes to the oracle."""
        path = _write_graph(temp_dir, ["a", "b", "c"], [("a", "c"), ("b", "c")])
        assert run(["chi-o", "--graph", path]) == 0
        assert capsys.readouterr().out == "2\n"

    def test_cli_chi_o_index_of_large_esp_graph(self, capsys, temp_dir):
        """Test chi'_o of a 40 vertex path file, past the oracle's size cap."""
        vertices = [f"p{i}" for i in range(40)]
        path = _write_graph(temp_dir, vertices, list(zip(vertices, vertices[1:])))
        assert run(["chi-o-index", "--graph", path, "--witness"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "3"
        assert [line.split()[0] for line in lines[1:40]] == [str(k) for k in range(39)]

    def test_cli_recognize_esp(self, capsys, temp_dir):
        """Test recognition output for a failure and a success."""
        path = _write_graph(temp_dir, ["a", "b", "c"], [("a", "c"), ("b", "c")])
        assert run(["recognize-esp", "--graph", path]) == 0
        assert capsys.readouterr().out.startswith("not esp: digraph has 2 sources")

        path = _write_graph(temp_dir, ["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert run(["recognize-esp", "--graph", path]) == 0
        assert capsys.readouterr().out == "a->b * b->c\n"

    def test_cli_color_qr7_rejects_non_esp_graph(self, capsys, temp_dir):
        """Test that color-qr7 needs an esp digraph."""
        path = _write_graph(temp_dir, ["a", "b", "c"], [("a", "c"), ("b", "c")])
        assert run(["color-qr7", "--graph", path]) == 2
        assert "esp" in capsys.readouterr().err

    def test_cli_emit_cnf(self, capsys, temp_dir):
        """Test writing a vertex coloring CNF document."""
        path = _write_graph(temp_dir, ["u", "v"], [("u", "v")])
        saved = Path(temp_dir) / "out" / "d.cnf"
        assert run(["emit-cnf", "--graph", path, "--r", "2", "--save", str(saved)]) == 0
        out = capsys.readouterr().out
        assert "p cnf 5 8" in out
        assert saved.read_text() == out

    def test_cli_emit_oci_cnf(self, capsys):
        """Test writing an arc coloring CNF document."""
        assert run(["emit-cnf", "--flavor", "msp", "--expr", "a * b * c", "--r", "1", "--problem", "oci"]) == 0
        assert "arc=0:a->b" in capsys.readouterr().out

    def test_cli_emit_lp(self, capsys):
        """Test writing an LP model."""
        assert run(["emit-lp", "--flavor", "esp", "--expr", "a->b * b->c", "--r", "3"]) == 0
        out = capsys.readouterr().out
        assert "OneColor_0" in out
        assert "Direction_" in out

    def test_cli_emit_needs_r(self, capsys):
        """Test that the emit subcommands need --r."""
        assert run(["emit-cnf", "--fixture", "X1"]) == 2
        assert "--r" in capsys.readouterr().err

    def test_cli_bench(self, capsys, temp_dir):
        """Test the bench report on stdout and in a file."""
        report = Path(temp_dir) / "bench.txt"
        assert run(["bench", "--generator", "msp_chain", "--sizes", "10,20", "--save", str(report)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("BENCH msp_chain\n")
        assert report.read_text() == out

    def test_cli_bench_rejects_descending_sizes(self, capsys):
        """Test that descending bench sizes are an error."""
        assert run(["bench", "--sizes", "20,10"]) == 1
        assert capsys.readouterr().err.startswith("error:")

    def test_cli_fixtures(self, capsys):
        """Test listing fixtures with their flavors."""
        assert run(["fixtures"]) == 0
        assert capsys.readouterr().out.splitlines() == [
            "X1 esp", "X2 esp", "X3 esp", "X4 msp", "X5 msp", "X6 msp",
        ]

    def test_cli_list_fixtures(self, capsys):
        """Test the --list-fixtures flag."""
        assert run(["--list-fixtures"]) == 0
        assert capsys.readouterr().out.split() == ["X1", "X2", "X3", "X4", "X5", "X6"]

    @pytest.mark.parametrize("argv,code", [
        ([], 2),
        (["frobnicate"], 2),
        (["chi-o", "--flavor", "esp"], 2),
        (["chi-o", "--expr", "a->b"], 2),
        (["chi-o", "--fixture", "X1", "--expr", "a->b", "--flavor", "esp"], 2),
        (["parse", "--flavor", "esp", "--expr", "a->"], 1),
        (["parse", "--flavor", "msp", "--expr", "a * a"], 0),
        (["eval", "--flavor", "msp", "--expr", "a * a"], 1),
        (["chi-o", "--fixture", "X9"], 1),
        (["color-qr7", "--fixture", "X4"], 1),
        (["--config", "/nonexistent/config.yaml", "chi-o", "--fixture", "X1"], 1),
    ])
    def test_cli_exit_codes(self, capsys, argv, code):
        """Test the exit codes of usage, input and success cases."""
        assert run(argv) == code

    def test_cli_syntax_error_position(self, capsys):
        """Test that syntax errors report their column."""
        assert run(["parse", "--flavor", "esp", "--expr", "v1 $ v2"]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:")
        assert "column 4" in err

    def test_cli_config_file(self, capsys, temp_dir):
        """Test reading the output section of a config file."""
        config = Path(temp_dir) / "config.yaml"
        config.write_text("output:\n  witness: true\n")
        assert run(["--config", str(config), "chi-o", "--flavor", "esp", "--expr", "a->b"]) == 0
        assert capsys.readouterr().out.splitlines()[1] == "a 1"

    @pytest.mark.slow
    def test_cli_x6_chromatic_index(self, capsys):
        """Test chi'_o of the msp fixture X6 from the command line, with pruning as in the benchmarks."""
        assert run(["chi-o-index", "--flavor", "msp", "--fixture", "X6", "--prune", "on"]) == 0
        assert capsys.readouterr().out == "7\n"
