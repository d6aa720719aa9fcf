"""
Series-parallel expression trees and their flattened decomposition trees.

Expressions for long chains are millions of nodes deep, so equality, hashing,
``repr`` and traversal are written without recursion.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterator, List, Optional, Sequence, Tuple, Union

from models.errors import FlavorMismatchError


class Flavor(Enum):
    """Expression flavor: arc leaves (esp) or vertex leaves (msp)."""
    ESP = "esp"
    MSP = "msp"

    @classmethod
    def parse(cls, value: Union[str, 'Flavor']) -> 'Flavor':
        if isinstance(value, Flavor):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise FlavorMismatchError(f"Unknown flavor: {value!r} (expected esp or msp)")


class NodeKind(Enum):
    LEAF = "leaf"
    PARALLEL = "parallel"
    SERIES = "series"


class _Node:
    """Shared structural behaviour of the four node classes."""
    __slots__ = ()

    kind: NodeKind

    def children(self) -> Tuple['Node', ...]:
        return ()

    def _fields(self) -> tuple:
        return ()

    def __eq__(self, other):
        if not isinstance(other, _Node):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if type(a) is not type(b):
                return False
            if a.kind is NodeKind.LEAF:
                if a._fields() != b._fields():
                    return False
            else:
                stack.append((a.right, b.right))
                stack.append((a.left, b.left))
        return True

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        values = {}
        for node in postorder(self):
            if node.kind is NodeKind.LEAF:
                values[id(node)] = hash((type(node).__name__,) + node._fields())
            else:
                values[id(node)] = hash((node.kind.value, values[id(node.left)], values[id(node.right)]))
        return values[id(self)]

    def __repr__(self):
        parts: List[str] = []
        stack: List[Union['_Node', str]] = [self]
        while stack:
            item = stack.pop()
            if isinstance(item, str):
                parts.append(item)
            elif item.kind is NodeKind.LEAF:
                parts.append(f"{type(item).__name__}({', '.join(repr(f) for f in item._fields())})")
            else:
                parts.append(f"{type(item).__name__}(")
                stack.extend([")", item.right, ", ", item.left])
        return "".join(parts)


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class EspLeaf(_Node):
    """Single arc ``tail -> head``."""
    tail: str
    head: str

    kind = NodeKind.LEAF

    def _fields(self) -> tuple:
        return (self.tail, self.head)


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class MspLeaf(_Node):
    """Single vertex."""
    name: str

    kind = NodeKind.LEAF

    def _fields(self) -> tuple:
        return (self.name,)


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Parallel(_Node):
    left: '_Node'
    right: '_Node'

    kind = NodeKind.PARALLEL

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Series(_Node):
    left: '_Node'
    right: '_Node'

    kind = NodeKind.SERIES

    def children(self):
        return (self.left, self.right)


Node = Union[EspLeaf, MspLeaf, Parallel, Series]


def postorder(root: _Node) -> Iterator[_Node]:
    """Children before parents, left subtree before right subtree."""
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded or node.kind is NodeKind.LEAF:
            yield node
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))


def chain(nodes: List[_Node], composition) -> _Node:
    """Left-deep composition of ``nodes`` with ``Series`` or ``Parallel``."""
    if not nodes:
        raise ValueError("Cannot compose an empty list of expressions")
    result = nodes[0]
    for node in nodes[1:]:
        result = composition(result, node)
    return result


@dataclass(frozen=True)
class SpExpression:
    """Expression tree together with its flavor."""
    root: Node
    flavor: Flavor

    def __post_init__(self):
        expected = EspLeaf if self.flavor is Flavor.ESP else MspLeaf
        for leaf in self.leaves():
            if not isinstance(leaf, expected):
                raise FlavorMismatchError(
                    f"{type(leaf).__name__} inside an {self.flavor.value} expression"
                )

    def leaves(self) -> Iterator[Node]:
        """Leaves in left-to-right order."""
        return (node for node in postorder(self.root) if node.kind is NodeKind.LEAF)

    @property
    def leaf_count(self) -> int:
        return sum(1 for _ in self.leaves())

    @property
    def node_count(self) -> int:
        return sum(1 for _ in postorder(self.root))

    def __str__(self) -> str:
        from services.expression_parser import ExpressionPrinter
        return ExpressionPrinter().format(self)


class TerminalTuples:
    """Terminal vertex tuples of every node of an msp tree, built on first access.

    A node either holds its tuple or lists the nodes whose tuples it concatenates,
    so a chain of k parallel compositions is recorded in O(k) and each tuple is
    assembled once.
    """

    def __init__(self, size: int):
        self._values: List[Optional[Tuple[Hashable, ...]]] = [None] * size
        self._parts: List[Tuple[int, ...]] = [()] * size

    def set(self, node: int, value: Tuple[Hashable, ...]):
        self._values[node] = value

    def concat(self, node: int, *parts: int):
        self._parts[node] = parts

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, node: int) -> Tuple[Hashable, ...]:
        value = self._values[node]
        if value is not None:
            return value
        collected: List[Hashable] = []
        stack = [node]
        while stack:
            current = stack.pop()
            known = self._values[current]
            if known is not None:
                collected.extend(known)
            else:
                stack.extend(reversed(self._parts[current]))
        value = tuple(collected)
        self._values[node] = value
        return value


@dataclass
class DecompositionTree:
    """Post-order flattening of an expression annotated with terminal vertex ids.

    Node ``i`` has kind ``kinds[i]``; children indices are ``left[i]``/``right[i]``
    (-1 for leaves). Children always precede their parent, so ``range(len(tree))``
    is a bottom-up traversal and ``root`` is the last index. For esp trees the
    terminal tuples hold exactly one vertex each. For msp series nodes
    ``arc_start[i]`` is the id of the first arc created by that node.
    """
    expression: SpExpression
    kinds: List[NodeKind] = field(default_factory=list)
    left: List[int] = field(default_factory=list)
    right: List[int] = field(default_factory=list)
    leaf_index: List[int] = field(default_factory=list)
    sources: Sequence[Tuple[Hashable, ...]] = field(default_factory=list)
    sinks: Sequence[Tuple[Hashable, ...]] = field(default_factory=list)
    arc_start: List[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.kinds)

    @property
    def root(self) -> int:
        return len(self.kinds) - 1

    @property
    def flavor(self) -> Flavor:
        return self.expression.flavor

    def source(self, node: int) -> Hashable:
        """Single source of an esp node."""
        return self.sources[node][0]

    def sink(self, node: int) -> Hashable:
        return self.sinks[node][0]

    def is_leaf(self, node: int) -> bool:
        return self.kinds[node] is NodeKind.LEAF


@dataclass(frozen=True)
class NotEsp:
    """Returned by esp recognition when the digraph is not edge series-parallel."""
    reason: str

    def __bool__(self) -> bool:
        return False
