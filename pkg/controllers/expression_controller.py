"""
Evaluation of series-parallel expressions and reduction-based esp recognition.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Tuple, Union

from models.digraph import OrientedDigraph
from models.errors import DuplicateVertexError, NameConsistencyError
from models.expression import (
    DecompositionTree, EspLeaf, Flavor, MspLeaf, NodeKind, NotEsp,
    Parallel, Series, SpExpression, TerminalTuples
)
from models.solver_config import SolverConfig


@dataclass
class Evaluation:
    """Digraph of an expression plus the bookkeeping that ties it to the tree.

    ``names`` maps every leaf name to the vertex ids it ended up on.
    """
    graph: OrientedDigraph
    tree: DecompositionTree
    names: Dict[str, Tuple[Hashable, ...]] = field(default_factory=dict)

    @property
    def source(self) -> Hashable:
        """Source of an esp evaluation."""
        return self.tree.source(self.tree.root)

    @property
    def sink(self) -> Hashable:
        return self.tree.sink(self.tree.root)


class ExpressionEvaluator:
    """Builds digraphs and decomposition trees from expressions."""

    def __init__(self, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig()
        self.logger = logging.getLogger(self.__class__.__name__)

    def evaluate(self, expression: SpExpression, strict: Optional[bool] = None) -> Evaluation:
        """Evaluate ``expression``.

        esp: parallel composition identifies both terminals, series identifies the
        sink of the left operand with the source of the right one. Each vertex is
        named after the first leaf slot that lands on it; a name already taken by
        another vertex gets a ``_k`` suffix. With ``strict`` every identified slot
        must carry the same name and distinct vertices distinct names.

        msp: vertex id = leaf name; series adds every arc from the sinks of the
        left operand to the sources of the right one.
        """
        strict = self.config.strict_names if strict is None else strict
        tree, leaves = self._flatten(expression)
        if expression.flavor is Flavor.ESP:
            evaluation = self._evaluate_esp(tree, leaves, strict)
        else:
            evaluation = self._evaluate_msp(tree, leaves)
        self.logger.debug(
            f"Evaluated {expression.flavor.value} expression: "
            f"{evaluation.graph.vertex_count} vertices, {evaluation.graph.arc_count} arcs"
        )
        return evaluation

    def decomposition_tree(self, expression: SpExpression) -> DecompositionTree:
        return self.evaluate(expression).tree

    def line_msp_expression(self, expression: SpExpression) -> SpExpression:
        """Same operator tree with the k-th arc leaf replaced by vertex leaf ``e{k}``."""
        if expression.flavor is not Flavor.ESP:
            raise ValueError("Line digraph expressions are built from esp expressions")
        built: List = []
        leaf_counter = 0
        stack = [(expression.root, False)]
        while stack:
            node, expanded = stack.pop()
            if node.kind is NodeKind.LEAF:
                built.append(MspLeaf(f"e{leaf_counter}"))
                leaf_counter += 1
            elif not expanded:
                stack.append((node, True))
                stack.append((node.right, False))
                stack.append((node.left, False))
            else:
                right = built.pop()
                left = built.pop()
                built.append(type(node)(left, right))
        return SpExpression(built[0], Flavor.MSP)

    @staticmethod
    def _flatten(expression: SpExpression) -> Tuple[DecompositionTree, List]:
        tree = DecompositionTree(expression)
        leaves: List = []
        completed: List[int] = []
        stack = [(expression.root, False)]
        while stack:
            node, expanded = stack.pop()
            if node.kind is NodeKind.LEAF:
                tree.kinds.append(NodeKind.LEAF)
                tree.left.append(-1)
                tree.right.append(-1)
                tree.leaf_index.append(len(leaves))
                leaves.append(node)
            elif not expanded:
                stack.append((node, True))
                stack.append((node.right, False))
                stack.append((node.left, False))
                continue
            else:
                right = completed.pop()
                left = completed.pop()
                tree.kinds.append(node.kind)
                tree.left.append(left)
                tree.right.append(right)
                tree.leaf_index.append(-1)
            completed.append(len(tree.kinds) - 1)
        return tree, leaves

    def _evaluate_esp(self, tree: DecompositionTree, leaves: List[EspLeaf], strict: bool) -> Evaluation:
        # slot 2k is the tail of leaf k, slot 2k+1 its head
        parent = list(range(2 * len(leaves)))

        def find(slot: int) -> int:
            while parent[slot] != slot:
                parent[slot] = parent[parent[slot]]
                slot = parent[slot]
            return slot

        def union(a: int, b: int):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        size = len(tree.kinds)
        source_slot = [0] * size
        sink_slot = [0] * size
        for node in range(size):
            kind = tree.kinds[node]
            if kind is NodeKind.LEAF:
                k = tree.leaf_index[node]
                source_slot[node], sink_slot[node] = 2 * k, 2 * k + 1
                continue
            left, right = tree.left[node], tree.right[node]
            if kind is NodeKind.PARALLEL:
                union(source_slot[left], source_slot[right])
                union(sink_slot[left], sink_slot[right])
                sink_slot[node] = sink_slot[left]
            else:
                union(sink_slot[left], source_slot[right])
                sink_slot[node] = sink_slot[right]
            source_slot[node] = source_slot[left]

        def slot_name(slot: int) -> str:
            leaf = leaves[slot // 2]
            return leaf.head if slot % 2 else leaf.tail

        vertex_of_root: Dict[int, str] = {}
        taken = set()
        vertices: List[str] = []
        names: Dict[str, List[str]] = {}
        for slot in range(2 * len(leaves)):
            root = find(slot)
            name = slot_name(slot)
            if root == slot:
                vertex = name
                if vertex in taken:
                    if strict:
                        raise NameConsistencyError(f"Name {name!r} labels two different vertices")
                    suffix = 2
                    while f"{name}_{suffix}" in taken:
                        suffix += 1
                    vertex = f"{name}_{suffix}"
                taken.add(vertex)
                vertex_of_root[slot] = vertex
                vertices.append(vertex)
            elif strict and name != slot_name(root):
                raise NameConsistencyError(
                    f"Identified endpoints carry different names: {slot_name(root)!r} and {name!r}"
                )
            bucket = names.setdefault(name, [])
            if vertex_of_root[root] not in bucket:
                bucket.append(vertex_of_root[root])

        arcs = [(vertex_of_root[find(2 * k)], vertex_of_root[find(2 * k + 1)]) for k in range(len(leaves))]
        tree.sources = [(vertex_of_root[find(slot)],) for slot in source_slot]
        tree.sinks = [(vertex_of_root[find(slot)],) for slot in sink_slot]
        tree.arc_start = [-1] * size
        graph = OrientedDigraph(tuple(vertices), tuple(arcs))
        return Evaluation(graph, tree, {name: tuple(ids) for name, ids in names.items()})

    def _evaluate_msp(self, tree: DecompositionTree, leaves: List[MspLeaf]) -> Evaluation:
        vertices = []
        seen = set()
        for leaf in leaves:
            if leaf.name in seen:
                raise DuplicateVertexError(f"Vertex {leaf.name!r} occurs twice in an msp expression")
            seen.add(leaf.name)
            vertices.append(leaf.name)

        size = len(tree.kinds)
        sources, sinks = TerminalTuples(size), TerminalTuples(size)
        tree.arc_start = [-1] * size
        arcs: List[Tuple[str, str]] = []
        for node in range(size):
            kind = tree.kinds[node]
            if kind is NodeKind.LEAF:
                name = (leaves[tree.leaf_index[node]].name,)
                sources.set(node, name)
                sinks.set(node, name)
                continue
            left, right = tree.left[node], tree.right[node]
            if kind is NodeKind.PARALLEL:
                sources.concat(node, left, right)
                sinks.concat(node, left, right)
            else:
                tree.arc_start[node] = len(arcs)
                heads = sources[right]
                for tail in sinks[left]:
                    for head in heads:
                        arcs.append((tail, head))
                sources.concat(node, left)
                sinks.concat(node, right)
        tree.sources, tree.sinks = sources, sinks

        graph = OrientedDigraph(tuple(vertices), tuple(arcs))
        return Evaluation(graph, tree, {name: (name,) for name in vertices})


class EspRecognizer:
    """Series/parallel reduction: merge parallel arcs, contract in=out=1 vertices."""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def recognize_esp(self, graph: OrientedDigraph) -> Union[SpExpression, NotEsp]:
        """Expression evaluating to a digraph isomorphic to ``graph``, or ``NotEsp``."""
        if graph.arc_count == 0:
            return NotEsp("digraph has no arcs")
        sources, sinks = graph.sources(), graph.sinks()
        if len(sources) != 1:
            return NotEsp(f"digraph has {len(sources)} sources, an esp-digraph has exactly one")
        if len(sinks) != 1:
            return NotEsp(f"digraph has {len(sinks)} sinks, an esp-digraph has exactly one")
        source, sink = sources[0], sinks[0]

        expressions: Dict[int, object] = {}
        endpoints: Dict[int, Tuple[Hashable, Hashable]] = {}
        by_pair: Dict[Tuple[Hashable, Hashable], int] = {}
        out_arcs = {v: set() for v in graph.vertices}
        in_arcs = {v: set() for v in graph.vertices}
        next_key = 0

        def add_arc(tail, head, node) -> bool:
            nonlocal next_key
            if (head, tail) in by_pair:
                return False
            key = by_pair.get((tail, head))
            if key is not None:
                expressions[key] = Parallel(expressions[key], node)
                return True
            key = next_key
            next_key += 1
            expressions[key] = node
            endpoints[key] = (tail, head)
            by_pair[(tail, head)] = key
            out_arcs[tail].add(key)
            in_arcs[head].add(key)
            return True

        def remove_arc(key):
            tail, head = endpoints.pop(key)
            del by_pair[(tail, head)]
            out_arcs[tail].discard(key)
            in_arcs[head].discard(key)
            return expressions.pop(key)

        for tail, head in graph.arcs:
            add_arc(tail, head, EspLeaf(str(tail), str(head)))

        worklist = deque(graph.vertices)
        removed = set()
        while worklist:
            vertex = worklist.popleft()
            if vertex in (source, sink) or vertex in removed:
                continue
            if len(in_arcs[vertex]) != 1 or len(out_arcs[vertex]) != 1:
                continue
            incoming = next(iter(in_arcs[vertex]))
            outgoing = next(iter(out_arcs[vertex]))
            tail, head = endpoints[incoming][0], endpoints[outgoing][1]
            if tail == head:
                return NotEsp(f"directed cycle through {vertex!r}")
            node = Series(remove_arc(incoming), remove_arc(outgoing))
            removed.add(vertex)
            if not add_arc(tail, head, node):
                return NotEsp(f"directed cycle between {tail!r} and {head!r}")
            worklist.append(tail)
            worklist.append(head)

        if len(expressions) == 1 and (source, sink) in by_pair:
            self.logger.debug(f"Recognized esp-digraph with {graph.arc_count} arcs")
            return SpExpression(expressions[by_pair[(source, sink)]], Flavor.ESP)
        return NotEsp(f"reduction stopped with {len(expressions)} arcs left")
