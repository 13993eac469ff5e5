"""Side-information digraphs on the three receivers {1, 2, 3}.

An arc ``i -> j`` means receiver ``i`` knows message ``M_j`` a priori.
Graphs are stored as 6-bit masks so the full set of 64 labeled graphs can
be swept exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

VERTICES = (1, 2, 3)

# bit position of every possible arc
ARCS = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))
_ARC_BIT = {arc: k for k, arc in enumerate(ARCS)}

Arc = tuple[int, int]
Permutation = tuple[int, int, int]


class GraphError(ValueError):
    """Malformed side-information input (self-loop, unknown vertex, bad syntax)."""


@dataclass(frozen=True, order=True)
class SideInfoGraph:
    mask: int = 0

    def __post_init__(self):
        if not 0 <= self.mask < 64:
            raise GraphError(f"arc mask out of range: {self.mask}")

    @classmethod
    def from_arcs(cls, arcs) -> "SideInfoGraph":
        mask = 0
        for i, j in arcs:
            if i == j:
                raise GraphError(f"self-loop {i}>{j} is not allowed")
            if (i, j) not in _ARC_BIT:
                raise GraphError(f"arc {i}>{j} has a vertex outside {{1,2,3}}")
            mask |= 1 << _ARC_BIT[(i, j)]
        return cls(mask)

    @classmethod
    def parse(cls, text: str) -> "SideInfoGraph":
        """Parse the ``"2>1,2>3,3>2"`` encoding; the empty string is the empty graph."""
        arcs = []
        for token in filter(None, (t.strip() for t in text.split(","))):
            parts = token.split(">")
            if len(parts) != 2:
                raise GraphError(f"cannot parse arc {token!r}; expected 'i>j'")
            try:
                arcs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise GraphError(f"cannot parse arc {token!r}; expected 'i>j'") from None
        return cls.from_arcs(arcs)

    @property
    def arcs(self) -> frozenset[Arc]:
        return frozenset(a for k, a in enumerate(ARCS) if self.mask >> k & 1)

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self.mask >> _ARC_BIT[(i, j)] & 1)

    def out_neighbors(self, i: int) -> frozenset[int]:
        """Indices of the messages receiver ``i`` knows."""
        return frozenset(j for (a, j) in self.arcs if a == i)

    def known_messages(self, i: int) -> frozenset[str]:
        return frozenset(f"M{j}" for j in self.out_neighbors(i))

    def relabel(self, perm: Permutation) -> "SideInfoGraph":
        """Image of the graph under vertex ``v -> perm[v - 1]``."""
        return SideInfoGraph.from_arcs((perm[i - 1], perm[j - 1]) for i, j in self.arcs)

    def induced(self, members) -> frozenset[Arc]:
        s = set(members)
        return frozenset((i, j) for i, j in self.arcs if i in s and j in s)

    def encode(self) -> str:
        return ",".join(f"{i}>{j}" for i, j in sorted(self.arcs))

    def __str__(self):
        return "{" + self.encode() + "}"

    def __repr__(self):
        return f"SideInfoGraph({self.encode()!r})"


@dataclass(frozen=True)
class IsoClass:
    index: int
    permutation: Permutation


def build_graph(k1, k2, k3) -> SideInfoGraph:
    """Graph from the three known-message sets.

    Messages may be given as ints (``2``) or names (``"M2"``).
    """
    arcs = []
    for i, known in zip(VERTICES, (k1, k2, k3)):
        for m in known:
            j = int(m[1:]) if isinstance(m, str) else int(m)
            if j == i:
                raise GraphError(f"receiver {i} cannot know its own message M{i}")
            arcs.append((i, j))
    return SideInfoGraph.from_arcs(arcs)


def _has_cycle(arcs: frozenset[Arc], members) -> bool:
    remaining = set(members)
    # peel vertices of outdegree zero; a cycle is what survives
    while remaining:
        sinks = [v for v in remaining
                 if not any(i == v and j in remaining for i, j in arcs)]
        if not sinks:
            return True
        remaining -= set(sinks)
    return False


def is_acyclic(g: SideInfoGraph, members) -> bool:
    return not _has_cycle(g.induced(members), members)


def acyclic_vertex_subsets(g: SideInfoGraph) -> list[frozenset[int]]:
    """Every nonempty vertex set whose induced subgraph has no directed cycle."""
    out = []
    for size in (1, 2, 3):
        for members in combinations(VERTICES, size):
            if is_acyclic(g, members):
                out.append(frozenset(members))
    return out


def decode_order(g: SideInfoGraph, q) -> list[int]:
    """Order in which a receiver holding all outputs of ``q`` peels off messages.

    Each vertex appears only after every out-neighbour inside ``q``; ties go
    to the smallest label.
    """
    remaining = set(q)
    if not remaining or not remaining <= set(VERTICES):
        raise GraphError(f"invalid vertex subset {sorted(q)}")
    arcs = g.induced(remaining)
    order: list[int] = []
    while remaining:
        ready = sorted(v for v in remaining
                       if all(j in order for i, j in arcs if i == v))
        if not ready:
            raise ValueError(f"induced subgraph on {sorted(q)} has a directed cycle")
        order.append(ready[0])
        remaining.discard(ready[0])
    return order


def strip_non_cycle_arcs(g: SideInfoGraph) -> SideInfoGraph:
    """Keep exactly the arcs lying on some directed 2- or 3-cycle."""
    keep = []
    for i, j in g.arcs:
        if g.has_arc(j, i):
            keep.append((i, j))
            continue
        k = 6 - i - j
        if g.has_arc(j, k) and g.has_arc(k, i):
            keep.append((i, j))
    return SideInfoGraph.from_arcs(keep)


def all_labeled_graphs() -> list[SideInfoGraph]:
    return [SideInfoGraph(m) for m in range(64)]


def _g(text: str) -> SideInfoGraph:
    return SideInfoGraph.parse(text)


# Representatives of the 16 isomorphism classes, indexed 1..16.
CATALOG: dict[int, SideInfoGraph] = {
    1: _g(""),
    2: _g("1>2"),
    3: _g("1>2,1>3"),
    4: _g("2>1,3>1"),
    5: _g("1>2,2>3"),
    6: _g("1>2,1>3,2>3"),
    7: _g("1>2,2>3,3>1"),
    8: _g("2>3,3>2"),
    9: _g("1>2,2>3,3>2"),
    10: _g("1>2,1>3,2>3,3>2"),
    11: _g("2>1,2>3,3>2"),
    12: _g("1>2,2>3,3>2,3>1"),
    13: _g("2>1,3>1,2>3,3>2"),
    14: _g("1>2,2>1,2>3,3>2"),
    15: _g("1>2,2>1,2>3,3>2,1>3"),
    16: _g("1>2,1>3,2>1,2>3,3>1,3>2"),
}

_CATALOG_BY_MASK = {g.mask: k for k, g in CATALOG.items()}
PERMUTATIONS: tuple[Permutation, ...] = tuple(permutations(VERTICES))


@lru_cache(maxsize=None)
def _canonicalize_mask(mask: int) -> IsoClass:
    g = SideInfoGraph(mask)
    for perm in PERMUTATIONS:  # lexicographic order
        k = _CATALOG_BY_MASK.get(g.relabel(perm).mask)
        if k is not None:
            return IsoClass(k, perm)
    raise AssertionError(f"graph {g} matches no catalog class")  # pragma: no cover


def canonicalize(g: SideInfoGraph) -> IsoClass:
    """Catalog index of ``g`` plus the smallest relabeling that maps it onto the representative."""
    return _canonicalize_mask(g.mask)


def is_g8_class(g: SideInfoGraph) -> tuple[int, int, int] | None:
    """Return ``(a, b, c)`` when ``g`` has exactly one 2-cycle ``b <-> c`` and
    neither ``b`` nor ``c`` knows ``M_a``; otherwise ``None``."""
    two_cycles = [(i, j) for i, j in combinations(VERTICES, 2)
                  if g.has_arc(i, j) and g.has_arc(j, i)]
    if len(two_cycles) != 1:
        return None
    b, c = two_cycles[0]
    a = 6 - b - c
    if g.has_arc(b, a) or g.has_arc(c, a):
        return None
    return a, b, c
