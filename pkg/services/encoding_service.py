"""
CNF and LP encodings of the oriented coloring decision problems.

Variables: ``x(v, j)`` when vertex v gets color j, and one orientation variable
``o(a, b)`` per color pair a < b that is true when arcs between the classes a
and b run from a to b. Clauses:

* every vertex gets exactly one color;
* the endpoints of an arc get different colors;
* x(u, a) and x(v, b) for an arc (u, v) force the pair orientation a -> b.

Forcing a single orientation per class pair is equivalent to forbidding two
arcs in opposite directions between the same two color classes. The LP adds the
usual y(j) color-used indicators and minimizes their sum.
"""
import io
import logging
import re
import tempfile
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pulp
from pysat.formula import CNF, IDPool

from models.digraph import OrientedDigraph
from models.errors import SizeCapExceededError
from models.solver_config import SolverConfig

HEADER_PATTERN = re.compile(r"^p\s+cnf\s+(\d+)\s+(\d+)", re.MULTILINE)


class EncodingFormat(Enum):
    CNF = "cnf"
    LP = "lp"


class Decision(Enum):
    SAT = "sat"
    UNSAT = "unsat"


class EncodingService:
    """Emits DIMACS CNF and LP documents and decides small CNF documents."""

    def __init__(self, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig()
        self.logger = logging.getLogger(self.__class__.__name__)

    def emit_ocn_decision(self, graph: OrientedDigraph, r: int,
                          format: Union[str, EncodingFormat] = EncodingFormat.CNF) -> str:
        """Satisfiable iff ``graph`` has an oriented r-vertex-coloring."""
        return self._emit(graph, r, EncodingFormat(format), "vertex", graph.vertices)

    def emit_oci_decision(self, graph: OrientedDigraph, r: int,
                          format: Union[str, EncodingFormat] = EncodingFormat.CNF) -> str:
        """Satisfiable iff ``graph`` has an oriented r-arc-coloring (coloring of its line digraph)."""
        line = graph.line_digraph()
        labels = [f"{arc_id}:{tail}->{head}" for arc_id, (tail, head) in enumerate(graph.arcs)]
        return self._emit(line, r, EncodingFormat(format), "arc", labels)

    def _emit(self, graph: OrientedDigraph, r: int, format: EncodingFormat,
              item: str, labels) -> str:
        if r < 1:
            raise ValueError(f"Color count must be positive, got {r}")
        if format is EncodingFormat.CNF:
            document = self._to_cnf(graph, r, item, labels)
        else:
            document = self._to_lp(graph, r, item, labels)
        self.logger.debug(f"Emitted {format.value} for {graph.vertex_count} {item}s and r={r}")
        return document

    def _to_cnf(self, graph: OrientedDigraph, r: int, item: str, labels) -> str:
        pool = IDPool()
        comments = [f"c oriented {r}-coloring decision over {graph.vertex_count} {item}s"]
        n = graph.vertex_count
        for i in range(n):
            for j in range(1, r + 1):
                var = pool.id(('x', i, j))
                comments.append(f"c varmap {var} x {item}={labels[i]} color={j}")
        for a in range(1, r + 1):
            for b in range(a + 1, r + 1):
                var = pool.id(('o', a, b))
                comments.append(f"c varmap {var} o colors={a}->{b}")

        def x(i: int, j: int) -> int:
            return pool.id(('x', i, j))

        def oriented(a: int, b: int) -> int:
            """Literal stating that class a points to class b."""
            return pool.id(('o', a, b)) if a < b else -pool.id(('o', b, a))

        formula = CNF()
        for i in range(n):
            formula.append([x(i, j) for j in range(1, r + 1)])
            for a in range(1, r + 1):
                for b in range(a + 1, r + 1):
                    formula.append([-x(i, a), -x(i, b)])
        index = graph.vertex_index
        for tail, head in graph.arcs:
            t, h = index[tail], index[head]
            for a in range(1, r + 1):
                formula.append([-x(t, a), -x(h, a)])
                for b in range(1, r + 1):
                    if a != b:
                        formula.append([-x(t, a), -x(h, b), oriented(a, b)])
        formula.nv = pool.top

        buffer = io.StringIO()
        formula.to_fp(buffer, comments=comments)
        return buffer.getvalue()

    def _to_lp(self, graph: OrientedDigraph, r: int, item: str, labels) -> str:
        colors = range(1, r + 1)
        n = graph.vertex_count
        problem = pulp.LpProblem("oriented_coloring_decision", pulp.LpMinimize)
        x = {(i, j): pulp.LpVariable(f"x_{i}_{j}", cat="Binary") for i in range(n) for j in colors}
        y = {j: pulp.LpVariable(f"y_{j}", cat="Binary") for j in colors}
        o = {(a, b): pulp.LpVariable(f"o_{a}_{b}", cat="Binary") for a in colors for b in colors if a < b}

        problem += pulp.lpSum(y[j] for j in colors), "ColorsUsed"
        for i in range(n):
            problem += pulp.lpSum(x[(i, j)] for j in colors) == 1, f"OneColor_{i}"
            for j in colors:
                problem += x[(i, j)] - y[j] <= 0, f"Uses_{i}_{j}"
        index = graph.vertex_index
        for k, (tail, head) in enumerate(graph.arcs):
            t, h = index[tail], index[head]
            for a in colors:
                problem += x[(t, a)] + x[(h, a)] <= 1, f"Proper_{k}_{a}"
                for b in colors:
                    if a < b:
                        problem += x[(t, a)] + x[(h, b)] - o[(a, b)] <= 1, f"Direction_{k}_{a}_{b}"
                    elif a > b:
                        problem += x[(t, a)] + x[(h, b)] + o[(b, a)] <= 2, f"Direction_{k}_{a}_{b}"

        varmap = [f"\\ varmap x_{i}_{j} {item}={labels[i]} color={j}" for i in range(n) for j in colors]
        varmap += [f"\\ varmap o_{a}_{b} colors={a}->{b}" for a, b in o]
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "decision.lp"
            problem.writeLP(str(path))
            body = path.read_text()
        return "\n".join(varmap) + "\n" + body

    def check_cnf_small(self, document: str) -> Decision:
        """Complete backtracking search; refuses documents above the variable cap.

        Clauses are bucketed by their largest variable and checked as soon as that
        variable is assigned.
        """
        formula = CNF(from_string=document)
        header = HEADER_PATTERN.search(document)
        declared = int(header.group(1)) if header else formula.nv
        declared = max(declared, formula.nv)
        cap = self.config.cnf_variable_cap
        if declared > cap:
            self.logger.error(f"CNF check refused: {declared} variables")
            raise SizeCapExceededError("check_cnf_small", cap, declared)

        if any(len(clause) == 0 for clause in formula.clauses):
            return Decision.UNSAT
        buckets: List[List[List[int]]] = [[] for _ in range(declared + 1)]
        for clause in formula.clauses:
            buckets[max(abs(literal) for literal in clause)].append(clause)
        value: Dict[int, bool] = {}

        def satisfied(clause: List[int]) -> bool:
            return any(value[abs(literal)] == (literal > 0) for literal in clause)

        def assign(var: int) -> bool:
            if var > declared:
                return True
            for choice in (False, True):
                value[var] = choice
                if all(satisfied(clause) for clause in buckets[var]) and assign(var + 1):
                    return True
            del value[var]
            return False

        return Decision.SAT if assign(1) else Decision.UNSAT

    @staticmethod
    def header_counts(document: str) -> Tuple[int, int]:
        """(variables, clauses) declared by the DIMACS header."""
        header = HEADER_PATTERN.search(document)
        if header is None:
            raise ValueError("Document has no 'p cnf' header")
        return int(header.group(1)), int(header.group(2))
