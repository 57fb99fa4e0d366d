"""Vertex sets, cover predicates, and the exhaustive cover oracle."""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable

from divcover.graph import Graph

__all__ = [
    "VertexSet",
    "OracleBudgetError",
    "is_cover",
    "is_non_excessive",
    "uncovered_edges",
    "enumerate_covers",
    "initial_cover",
    "maximal_matching_cover",
    "DEFAULT_COVER_BUDGET",
]

DEFAULT_COVER_BUDGET = 10**7


class OracleBudgetError(RuntimeError):
    """An exhaustive oracle was asked to scan more candidates than its budget allows."""


class VertexSet:
    """Fixed-width bit vector over vertices ``1..n``; vertex ``v`` is bit ``v - 1``.

    Instances are immutable and hashable.
    """

    __slots__ = ("n", "bits", "size")

    def __init__(self, n: int, bits: int = 0):
        if bits >> n:
            raise ValueError(f"bits {bits:#x} exceed width {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "size", bits.bit_count())

    def __setattr__(self, name, value):
        raise AttributeError("VertexSet is immutable")

    def __reduce__(self):
        return (VertexSet, (self.n, self.bits))

    @classmethod
    def from_vertices(cls, n: int, vertices: Iterable[int]) -> "VertexSet":
        bits = 0
        for v in vertices:
            if not 1 <= v <= n:
                raise ValueError(f"vertex {v} outside 1..{n}")
            bits |= 1 << (v - 1)
        return cls(n, bits)

    @classmethod
    def from_bitstring(cls, s: str) -> "VertexSet":
        """Inverse of :meth:`to_bitstring` (first character is vertex 1)."""
        if set(s) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {s!r}")
        return cls.from_vertices(len(s), (i + 1 for i, ch in enumerate(s) if ch == "1"))

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(n, (1 << n) - 1)

    def vertices(self) -> list[int]:
        b, out = self.bits, []
        while b:
            low = b & -b
            out.append(low.bit_length())
            b ^= low
        return out

    def to_bitstring(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.n))

    def sort_key(self) -> str:
        return self.to_bitstring()

    def with_vertex(self, v: int) -> "VertexSet":
        return VertexSet(self.n, self.bits | (1 << (v - 1)))

    def without_vertex(self, v: int) -> "VertexSet":
        return VertexSet(self.n, self.bits & ~(1 << (v - 1)))

    def __contains__(self, v: int) -> bool:
        return 1 <= v <= self.n and bool(self.bits >> (v - 1) & 1)

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        return iter(self.vertices())

    def __eq__(self, other):
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.n == other.n and self.bits == other.bits

    def __hash__(self):
        return hash((self.n, self.bits))

    def __str__(self):
        return "{" + ",".join(map(str, self.vertices())) + "}"

    def __repr__(self):
        return f"VertexSet({self.n}, {self})"


def _check_width(g: Graph, s: VertexSet) -> None:
    if s.n != g.n:
        raise ValueError(f"vertex set width {s.n} does not match graph order {g.n}")


def uncovered_edges(g: Graph, s: VertexSet) -> int:
    _check_width(g, s)
    bits = s.bits
    return sum(1 for em in g.edge_masks if not bits & em)


def is_cover(g: Graph, s: VertexSet) -> bool:
    _check_width(g, s)
    bits = s.bits
    return all(bits & em for em in g.edge_masks)


def is_non_excessive(g: Graph, s: VertexSet) -> bool:
    """True iff no single vertex can be dropped from the cover ``s``.

    Equivalently each member has a neighbour outside ``s``.
    """
    if not is_cover(g, s):
        raise ValueError(f"{s} is not a cover")
    outside = ~s.bits
    nbrs = g.neighbor_masks
    return all(nbrs[v - 1] & outside for v in s.vertices())


def enumerate_covers(g: Graph, k: int, budget: int = DEFAULT_COVER_BUDGET) -> list[VertexSet]:
    """All covers of size at most ``k``, sorted by bitstring (vertex 1 most significant).

    Raises :class:`OracleBudgetError` if more than ``budget`` subsets would be scanned.
    """
    k = max(0, min(k, g.n))
    candidates = sum(math.comb(g.n, j) for j in range(k + 1))
    if candidates > budget:
        raise OracleBudgetError(
            f"enumerating covers needs {candidates} candidate sets (budget {budget}); "
            "shrink n or k"
        )
    singles = [1 << i for i in range(g.n)]
    edge_masks = g.edge_masks
    found = []
    for size in range(k + 1):
        for combo in combinations(singles, size):
            bits = sum(combo)
            if all(bits & em for em in edge_masks):
                found.append(VertexSet(g.n, bits))
    found.sort(key=VertexSet.sort_key)
    return found


def maximal_matching_cover(g: Graph) -> VertexSet:
    """Both endpoints of a greedy maximal matching (edges scanned in sorted order)."""
    matched = 0
    for u, v in g.sorted_edges():
        bu, bv = 1 << (u - 1), 1 << (v - 1)
        if not matched & (bu | bv):
            matched |= bu | bv
    return VertexSet(g.n, matched)


def initial_cover(g: Graph, k: int, rng, budget: int = 10_000) -> VertexSet | None:
    """Find some cover of size at most ``k``, or return ``None``.

    Starts from the matching 2-approximation. If that is too large, runs a
    (1+1)-style descent with jump-and-repair that accepts offspring not larger
    than the current cover, for at most ``budget`` iterations. ``None`` means
    the instance may have no ``k``-cover.
    """
    from divcover.mutation import mutate_bits

    if k < 0:
        raise ValueError("k must be non-negative")
    x = maximal_matching_cover(g)
    if x.size <= k:
        return x
    bits, size = x.bits, x.size
    for _ in range(budget):
        y = mutate_bits(g.neighbor_masks, g.n, k, bits, rng)
        ysize = y.bit_count()
        if ysize <= size:
            bits, size = y, ysize
            if size <= k:
                return VertexSet(g.n, bits)
    return None
