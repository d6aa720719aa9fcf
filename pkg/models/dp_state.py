"""
Dynamic programming states over decomposition trees.

``OcnTriple`` is the vertex coloring state (H, l, r): color graph plus the
colors of the source and the sink. ``OciTriple`` is the arc coloring state
(H, L, R): color graph plus the family of out-color sets of the sources and
the family of in-color sets of the sinks. A family is a 128-bit integer whose
bit ``s`` is set when the 7-bit color set ``s`` belongs to it, so the empty
color set is bit 0.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple

from models.color_graph import ColorGraph, labels_of, mask_permutation
from models.expression import DecompositionTree


class OcnTriple(NamedTuple):
    h: ColorGraph
    ell: int
    r: int


class OciTriple(NamedTuple):
    h: ColorGraph
    big_l: int
    big_r: int

    def l_sets(self) -> Tuple[Tuple[int, ...], ...]:
        """Out-color sets of the sources as label tuples."""
        return tuple(labels_of(mask) for mask in decode_family(self.big_l))

    def r_sets(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(labels_of(mask) for mask in decode_family(self.big_r))

    def relabel(self, permutation: Tuple[int, ...]) -> 'OciTriple':
        """Image of the state under a permutation of the color labels."""
        table = mask_permutation(permutation)
        return OciTriple(self.h.relabel(permutation),
                         relabel_family(self.big_l, table), relabel_family(self.big_r, table))


class OcnSetTriple(NamedTuple):
    """Vertex coloring state of an msp node: color graph plus the color sets of sources and sinks."""
    h: ColorGraph
    ell: int
    r: int


def color_set_mask(colors: Iterable[int]) -> int:
    mask = 0
    for color in colors:
        mask |= 1 << (color - 1)
    return mask


def encode_family(color_sets: Iterable[Iterable[int]]) -> int:
    """Family of color sets (each an iterable of labels) as a 128-bit integer."""
    family = 0
    for colors in color_sets:
        family |= 1 << color_set_mask(colors)
    return family


@lru_cache(maxsize=65536)
def decode_family(family: int) -> Tuple[int, ...]:
    """7-bit masks of the color sets in ``family``, ascending."""
    masks = []
    while family:
        low = family & -family
        masks.append(low.bit_length() - 1)
        family ^= low
    return tuple(masks)


def relabel_family(family: int, table: Tuple[int, ...]) -> int:
    """Family with every color set mapped through a mask table."""
    image = 0
    for mask in decode_family(family):
        image |= 1 << table[mask]
    return image


StateSet = FrozenSet[Any]


@dataclass
class DpRun:
    """Per-node state sets of one bottom-up pass and one generating record per state.

    ``back[node][state]`` is ``(left_state, right_state, ...)`` for internal
    nodes; the msp series record also carries the color-set pairs and the colors
    assigned to them. Identical child sets share one record dictionary. When a
    node ends up with no state the pass stops there: ``exhausted_at`` is that
    node, the root gets the empty set and the nodes in between stay ``None``.
    """
    tree: DecompositionTree
    palette: int
    states: List[StateSet] = field(default_factory=list)
    back: List[Optional[Dict[Any, tuple]]] = field(default_factory=list)
    cache_hits: int = 0
    exhausted_at: Optional[int] = None

    @property
    def root_states(self) -> StateSet:
        return self.states[self.tree.root]

    @property
    def largest_state_set(self) -> int:
        return max((len(states) for states in self.states if states is not None), default=0)
