"""
Expression generators and the bundled example fixtures.
"""
import logging
import os
import random
from functools import lru_cache
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from models.errors import FixtureNotFoundError, GeneratorParameterError
from models.expression import (
    EspLeaf, Flavor, MspLeaf, Parallel, Series, SpExpression, chain
)
from services.expression_parser import ExpressionParser

FIXTURE_NAMES = ("X1", "X2", "X3", "X4", "X5", "X6")
DEFAULT_FIXTURE_DIR = Path(__file__).resolve().parent.parent / "data" / "fixtures"

# rooted tree as (name, [subtrees])
Tree = Tuple[str, Sequence['Tree']]


class ExpressionGenerator:
    """Builds the example families of esp and msp expressions."""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def esp_path(self, n: int) -> SpExpression:
        """v1->v2 * v2->v3 * ... * v(n-1)->vn, left-deep."""
        if n < 2:
            raise GeneratorParameterError(f"esp_path needs n >= 2, got {n}")
        root = EspLeaf("v1", "v2")
        for i in range(2, n):
            root = Series(root, EspLeaf(f"v{i}", f"v{i + 1}"))
        return SpExpression(root, Flavor.ESP)

    def esp_cycle_rev(self, n: int) -> SpExpression:
        """Directed path plus the arc v1->vn in parallel."""
        if n < 3:
            raise GeneratorParameterError(f"esp_cycle_rev needs n >= 3, got {n}")
        path = self.esp_path(n)
        return SpExpression(Parallel(path.root, EspLeaf("v1", f"v{n}")), Flavor.ESP)

    def msp_chain(self, n: int) -> SpExpression:
        """v1 * v2 * ... * vn."""
        if n < 1:
            raise GeneratorParameterError(f"msp_chain needs n >= 1, got {n}")
        root = MspLeaf("v1")
        for i in range(2, n + 1):
            root = Series(root, MspLeaf(f"v{i}"))
        return SpExpression(root, Flavor.MSP)

    def msp_bipartite(self, n: int, m: int) -> SpExpression:
        """(v1 + ... + vn) * (w1 + ... + wm): every v points to every w."""
        if n < 1 or m < 1:
            raise GeneratorParameterError(f"msp_bipartite needs n, m >= 1, got {n}, {m}")
        left = chain([MspLeaf(f"v{i}") for i in range(1, n + 1)], Parallel)
        right = chain([MspLeaf(f"w{j}") for j in range(1, m + 1)], Parallel)
        return SpExpression(Series(left, right), Flavor.MSP)

    def msp_rooted_tree(self, tree: Tree) -> SpExpression:
        """Out-rooted tree: root * (T1 + ... + Tk), arcs point away from the root."""
        return SpExpression(self._rooted_tree_node(tree), Flavor.MSP)

    def _rooted_tree_node(self, tree: Tree):
        name, subtrees = tree
        if not subtrees:
            return MspLeaf(name)
        children = [self._rooted_tree_node(subtree) for subtree in subtrees]
        return Series(MspLeaf(name), chain(children, Parallel))

    def msp_y(self, i: int, prefix: str = "y", start: int = 1) -> SpExpression:
        """Y0 = single vertex, Yi = Y0 + Y(i-1) * Y(i-1), every copy with fresh names."""
        if i < 0:
            raise GeneratorParameterError(f"msp_y needs i >= 0, got {i}")
        counter = iter(range(start, start + 2 ** (i + 1)))
        return SpExpression(self._y_node(i, prefix, counter), Flavor.MSP)

    def _y_node(self, i: int, prefix: str, counter: Iterator[int]):
        # names are drawn in leaf order
        leaf = MspLeaf(f"{prefix}{next(counter)}")
        if i == 0:
            return leaf
        first = self._y_node(i - 1, prefix, counter)
        second = self._y_node(i - 1, prefix, counter)
        return Parallel(leaf, Series(first, second))

    def x6(self) -> SpExpression:
        """Y0 * Y0 * Y6 * Y0 * Y0 with vertices v1..v131 in leaf order."""
        counter = iter(range(1, 132))
        parts = [MspLeaf(f"v{next(counter)}"), MspLeaf(f"v{next(counter)}")]
        parts.append(self._y_node(6, "v", counter))
        parts.extend([MspLeaf(f"v{next(counter)}"), MspLeaf(f"v{next(counter)}")])
        return SpExpression(chain(parts, Series), Flavor.MSP)

    def random_expression(self, flavor: Union[str, Flavor], size: int,
                          rng: Optional[random.Random] = None) -> SpExpression:
        """Random binary expression with ``size`` leaves (arcs for esp, vertices for msp)."""
        flavor = Flavor.parse(flavor)
        if size < 1:
            raise GeneratorParameterError(f"random_expression needs size >= 1, got {size}")
        rng = rng or random.Random(0)
        shape = self._random_shape(size, rng)
        return self.name_shape(shape, flavor)

    def _random_shape(self, size: int, rng: random.Random):
        if size == 1:
            return ("L",)
        left = rng.randint(1, size - 1)
        kind = rng.choice(("S", "P"))
        return (kind, [self._random_shape(left, rng), self._random_shape(size - left, rng)])

    def all_shapes(self, flavor: Union[str, Flavor], size: int) -> Iterator[SpExpression]:
        """Every expression with ``size`` leaves up to associativity, and for
        parallel composition up to commutativity."""
        flavor = Flavor.parse(flavor)
        if size < 1:
            raise GeneratorParameterError(f"all_shapes needs size >= 1, got {size}")
        for shape in _shapes(size, None):
            yield self.name_shape(shape, flavor)

    def name_shape(self, shape, flavor: Flavor) -> SpExpression:
        """Turn a shape into an expression with consistent vertex names."""
        counter = iter(range(1, 10 ** 9))
        if flavor is Flavor.MSP:
            return SpExpression(self._name_msp(shape, counter), Flavor.MSP)
        source, sink = f"v{next(counter)}", f"v{next(counter)}"
        return SpExpression(self._name_esp(shape, source, sink, counter), Flavor.ESP)

    def _name_msp(self, shape, counter):
        if shape[0] == "L":
            return MspLeaf(f"v{next(counter)}")
        composition = Series if shape[0] == "S" else Parallel
        return chain([self._name_msp(part, counter) for part in shape[1]], composition)

    def _name_esp(self, shape, source: str, sink: str, counter):
        if shape[0] == "L":
            return EspLeaf(source, sink)
        parts = shape[1]
        if shape[0] == "P":
            return chain([self._name_esp(part, source, sink, counter) for part in parts], Parallel)
        terminals = [source] + [f"v{next(counter)}" for _ in parts[:-1]] + [sink]
        return chain(
            [self._name_esp(part, terminals[k], terminals[k + 1], counter) for k, part in enumerate(parts)],
            Series,
        )


@lru_cache(maxsize=None)
def _shapes(size: int, excluded: Optional[str]) -> Tuple:
    """Canonical shapes with ``size`` leaves whose root kind is not ``excluded``.

    A series node lists at least two non-series parts in order; a parallel node
    lists at least two non-parallel parts in canonical (sorted) order.
    """
    result = []
    if size == 1:
        return (("L",),)
    if excluded != "S":
        for parts in _compositions(size, "S"):
            result.append(("S", list(parts)))
    if excluded != "P":
        for parts in _multisets(size, "P"):
            result.append(("P", list(parts)))
    return tuple(result)


def _compositions(size: int, kind: str) -> List[Tuple]:
    """Ordered sequences of >= 2 shapes (root kind != kind) with total ``size``."""
    sequences = []

    def extend(remaining: int, prefix: List):
        if remaining == 0:
            if len(prefix) >= 2:
                sequences.append(tuple(prefix))
            return
        for first in range(1, remaining + 1):
            if first == size:
                continue
            for shape in _shapes(first, kind):
                extend(remaining - first, prefix + [shape])

    extend(size, [])
    return sequences


def _multisets(size: int, kind: str) -> List[Tuple]:
    """Multisets of >= 2 shapes (root kind != kind) with total ``size``, as sorted tuples."""
    catalogue = []
    for part_size in range(1, size):
        for index, shape in enumerate(_shapes(part_size, kind)):
            catalogue.append(((part_size, index), shape))
    multisets = []

    def extend(remaining: int, start: int, prefix: List):
        if remaining == 0:
            if len(prefix) >= 2:
                multisets.append(tuple(prefix))
            return
        for position in range(start, len(catalogue)):
            (part_size, _), shape = catalogue[position]
            if part_size > remaining:
                break
            extend(remaining - part_size, position, prefix + [shape])

    extend(size, 0, [])
    return multisets


class FixtureService:
    """Loads the example expressions shipped under ``data/fixtures``."""

    def __init__(self, fixture_dir: Optional[Union[str, Path]] = None,
                 parser: Optional[ExpressionParser] = None):
        directory = fixture_dir or os.getenv('SPCOLOR_FIXTURE_DIR') or DEFAULT_FIXTURE_DIR
        self.fixture_dir = Path(directory)
        self.parser = parser or ExpressionParser()
        self.logger = logging.getLogger(self.__class__.__name__)

    def list_fixtures(self) -> List[str]:
        return list(FIXTURE_NAMES)

    def fixture_path(self, name: str) -> Path:
        key = name.upper()
        if key not in FIXTURE_NAMES:
            raise FixtureNotFoundError(f"Unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
        path = self.fixture_dir / f"{key}.sp"
        if not path.exists():
            raise FixtureNotFoundError(f"Fixture file missing: {path}")
        return path

    def fixture_text(self, name: str) -> str:
        return self.fixture_path(name).read_text(encoding='utf-8')

    def fixture_flavor(self, name: str) -> Flavor:
        return self.parser.read_flavor_header(self.fixture_text(name))

    def fixture(self, name: str) -> SpExpression:
        """Parsed fixture; its header decides the flavor."""
        expression = self.parser.parse_document(self.fixture_text(name))
        self.logger.debug(f"Loaded fixture {name} ({expression.flavor.value})")
        return expression

