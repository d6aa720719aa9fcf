"""
Color graphs on the labels 1..7 packed into machine words.

Arc (i, j) occupies bit ``(i-1)*7 + (j-1)`` of ``fwd`` and the mirrored bit
``(j-1)*7 + (i-1)`` of ``rev``. A graph is oriented exactly when
``fwd & rev == 0``; a loop sets the same bit in both words and is caught too.
"""
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Tuple

from models.errors import ColorRangeError, NotAnArcError

MAX_LABEL = 7
QR7_RESIDUES = (1, 2, 4)


def arc_bit(i: int, j: int) -> int:
    return 1 << ((i - 1) * MAX_LABEL + (j - 1))


def label_bit(i: int) -> int:
    return 1 << (i - 1)


def labels_of(mask: int) -> Tuple[int, ...]:
    """Labels whose bit is set in a 7-bit label mask."""
    return _labels_of(mask & 0x7F)


@lru_cache(maxsize=128)
def _labels_of(mask: int) -> Tuple[int, ...]:
    return tuple(i for i in range(1, MAX_LABEL + 1) if mask & (1 << (i - 1)))


def _check_label(i: int):
    if not 1 <= i <= MAX_LABEL:
        raise ColorRangeError(f"Color label {i} is outside 1..{MAX_LABEL}")


class ColorGraph(NamedTuple):
    """Label set plus arc bit matrix; immutable and hashable."""
    labels: int = 0
    fwd: int = 0
    rev: int = 0

    @classmethod
    def from_arcs(cls, arcs: Iterable[Tuple[int, int]], labels: Iterable[int] = ()) -> 'ColorGraph':
        label_mask = fwd = rev = 0
        for i in labels:
            _check_label(i)
            label_mask |= label_bit(i)
        for i, j in arcs:
            _check_label(i)
            _check_label(j)
            label_mask |= label_bit(i) | label_bit(j)
            fwd |= arc_bit(i, j)
            rev |= arc_bit(j, i)
        return cls(label_mask, fwd, rev)

    @property
    def order(self) -> int:
        """Number of labels, i.e. |V_H|."""
        return self.labels.bit_count()

    @property
    def size(self) -> int:
        return self.fwd.bit_count()

    @property
    def is_oriented(self) -> bool:
        return self.fwd & self.rev == 0

    def label_set(self) -> Tuple[int, ...]:
        return labels_of(self.labels)

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self.fwd & arc_bit(i, j))

    def arc_list(self) -> List[Tuple[int, int]]:
        """Arcs in (tail, head) lexicographic order."""
        result = []
        fwd = self.fwd
        while fwd:
            low = fwd & -fwd
            index = low.bit_length() - 1
            result.append((index // MAX_LABEL + 1, index % MAX_LABEL + 1))
            fwd ^= low
        return result

    def out_neighbors(self, i: int) -> Tuple[int, ...]:
        row = (self.fwd >> ((i - 1) * MAX_LABEL)) & 0x7F
        return labels_of(row)

    def in_neighbors(self, j: int) -> Tuple[int, ...]:
        row = (self.rev >> ((j - 1) * MAX_LABEL)) & 0x7F
        return labels_of(row)

    def union(self, other: 'ColorGraph') -> 'ColorGraph':
        """H1 + H2: union of labels and arcs."""
        return ColorGraph(self.labels | other.labels, self.fwd | other.fwd, self.rev | other.rev)

    def with_arc(self, i: int, j: int) -> 'ColorGraph':
        return ColorGraph(self.labels | label_bit(i) | label_bit(j),
                          self.fwd | arc_bit(i, j), self.rev | arc_bit(j, i))

    def is_subgraph_of(self, other: 'ColorGraph') -> bool:
        return self.labels & ~other.labels == 0 and self.fwd & ~other.fwd == 0

    def relabel(self, permutation: Tuple[int, ...]) -> 'ColorGraph':
        """Image under a label permutation; ``permutation[i - 1]`` is the new name of label i."""
        table = mask_permutation(permutation)
        fwd = rev = 0
        for i in range(MAX_LABEL):
            shift = (permutation[i] - 1) * MAX_LABEL
            fwd |= table[(self.fwd >> (i * MAX_LABEL)) & 0x7F] << shift
            rev |= table[(self.rev >> (i * MAX_LABEL)) & 0x7F] << shift
        return ColorGraph(table[self.labels], fwd, rev)


IDENTITY = tuple(range(1, MAX_LABEL + 1))


@lru_cache(maxsize=None)
def mask_permutation(permutation: Tuple[int, ...]) -> Tuple[int, ...]:
    """Image of every 7-bit label mask under ``permutation``."""
    images = []
    for mask in range(128):
        image = 0
        for i in _labels_of(mask):
            image |= label_bit(permutation[i - 1])
        images.append(image)
    return tuple(images)


def compose(outer: Tuple[int, ...], inner: Tuple[int, ...]) -> Tuple[int, ...]:
    """Permutation applying ``inner`` first, then ``outer``."""
    return tuple(outer[image - 1] for image in inner)


@lru_cache(maxsize=MAX_LABEL + 1)
def palette_generators(palette: int) -> Tuple[Tuple[int, ...], ...]:
    """Transposition (1 2) and the cycle 1 -> 2 -> ... -> palette; together they generate S_palette."""
    if palette < 2:
        return ()
    swap = (2, 1) + IDENTITY[2:]
    cycle = tuple(i % palette + 1 for i in range(1, palette + 1)) + IDENTITY[palette:]
    return (swap,) if palette == 2 else (swap, cycle)


@lru_cache(maxsize=1)
def qr7() -> ColorGraph:
    """Tournament on 1..7 with arc (i, j) iff j - i is 1, 2 or 4 modulo 7."""
    arcs = []
    for i in range(1, MAX_LABEL + 1):
        for j in range(1, MAX_LABEL + 1):
            if (j - i) % MAX_LABEL in QR7_RESIDUES:
                arcs.append((i, j))
    return ColorGraph.from_arcs(arcs, range(1, MAX_LABEL + 1))


def qr7_middle(a: int, c: int) -> int:
    """Smallest b with a->b and b->c both arcs of QR7."""
    _check_label(a)
    _check_label(c)
    graph = qr7()
    if not graph.has_arc(a, c):
        raise NotAnArcError(f"({a}, {c}) is not an arc of QR7")
    for b in range(1, MAX_LABEL + 1):
        if graph.has_arc(a, b) and graph.has_arc(b, c):
            return b
    raise NotAnArcError(f"No two-step path from {a} to {c} in QR7")
