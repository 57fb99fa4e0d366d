"""Total Hamming distance of a population, via per-position one-counts."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from divcover.covers import VertexSet

__all__ = [
    "Population",
    "hamming",
    "total_hamming",
    "pairwise_total_hamming",
    "diversity_from_counts",
    "replace_delta",
    "contribution",
    "max_total_hamming",
]


def hamming(x: VertexSet, y: VertexSet) -> int:
    if x.n != y.n:
        raise ValueError(f"width mismatch: {x.n} vs {y.n}")
    return (x.bits ^ y.bits).bit_count()


def diversity_from_counts(counts: Iterable[int], mu: int) -> int:
    return sum(c * (mu - c) for c in counts)


def _counts(members: Sequence[VertexSet], n: int) -> list[int]:
    counts = [0] * n
    for x in members:
        b = x.bits
        while b:
            low = b & -b
            counts[low.bit_length() - 1] += 1
            b ^= low
    return counts


class Population:
    """Ordered multiset of equal-width vertex sets with a cached one-count per position.

    ``counts[i]`` is the number of members containing vertex ``i + 1``. Edit the
    population only through :meth:`replace` / :meth:`set_members` so the cache
    stays coherent.
    """

    def __init__(self, members: Iterable[VertexSet]):
        members = list(members)
        if not members:
            raise ValueError("population must have at least one member")
        n = members[0].n
        if any(x.n != n for x in members):
            raise ValueError("population members must share one width")
        self.n = n
        self.members = members
        self.counts = _counts(members, n)

    @property
    def mu(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, j: int) -> VertexSet:
        return self.members[j]

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return f"Population([{', '.join(map(str, self.members))}], D={self.diversity})"

    @property
    def diversity(self) -> int:
        return diversity_from_counts(self.counts, len(self.members))

    def copy(self) -> "Population":
        p = Population.__new__(Population)
        p.n = self.n
        p.members = list(self.members)
        p.counts = list(self.counts)
        return p

    def replace(self, j: int, c: VertexSet) -> None:
        old = self.members[j]
        if c.n != self.n:
            raise ValueError(f"width mismatch: {c.n} vs {self.n}")
        counts = self.counts
        diff = old.bits ^ c.bits
        while diff:
            low = diff & -diff
            i = low.bit_length() - 1
            counts[i] += 1 if c.bits & low else -1
            diff ^= low
        self.members[j] = c

    def set_members(self, members: Sequence[VertexSet]) -> None:
        if len(members) != len(self.members):
            raise ValueError("population size must not change")
        self.members = list(members)
        self.counts = _counts(self.members, self.n)

    def multiset(self) -> tuple[int, ...]:
        """Order-free key: sorted member bitmasks."""
        return tuple(sorted(x.bits for x in self.members))

    def same_multiset(self, other: "Population") -> bool:
        return self.multiset() == other.multiset()

    def check_coherence(self) -> None:
        """Assert the cached counts match a rebuild from members."""
        rebuilt = _counts(self.members, self.n)
        if rebuilt != self.counts:
            raise AssertionError(f"count cache incoherent: {self.counts} != {rebuilt}")

    def to_json(self) -> dict:
        return {
            "members": [x.vertices() for x in self.members],
            "diversity": self.diversity,
        }

    @classmethod
    def from_vertex_lists(cls, n: int, lists: Iterable[Iterable[int]]) -> "Population":
        return cls(VertexSet.from_vertices(n, vs) for vs in lists)


def total_hamming(p: Population | Sequence[VertexSet]) -> int:
    """Sum of Hamming distances over unordered pairs, evaluated as sum_i n_i (mu - n_i)."""
    if not isinstance(p, Population):
        p = Population(p)
    return p.diversity


def pairwise_total_hamming(members: Sequence[VertexSet]) -> int:
    """Reference evaluation: explicit sum over all unordered pairs."""
    return sum(hamming(x, y) for x, y in combinations(members, 2))


def contribution(p: Population, j: int) -> int:
    """``D(P) - D(P without member j)``: the summed distance from member ``j`` to the rest."""
    x = p.members[j].bits
    mu = len(p.members)
    total = sum(p.counts)
    b = x
    counts = p.counts
    while b:
        low = b & -b
        total += mu - 2 * counts[low.bit_length() - 1]
        b ^= low
    return total


def replace_delta(p: Population, j: int, c: VertexSet) -> int:
    """Change in total Hamming distance if member ``j`` were replaced by ``c``.

    O(n) from the count cache. With ``m`` the current count at a position that
    flips, gaining a one changes that term by ``mu - 2m - 1`` and losing one by
    ``2m - mu - 1``.
    """
    if not 0 <= j < len(p.members):
        raise IndexError(f"member index {j} out of range for mu = {len(p.members)}")
    if c.n != p.n:
        raise ValueError(f"width mismatch: {c.n} vs {p.n}")
    mu = len(p.members)
    counts = p.counts
    delta = 0
    diff = p.members[j].bits ^ c.bits
    while diff:
        low = diff & -diff
        m = counts[low.bit_length() - 1]
        delta += mu - 2 * m - 1 if c.bits & low else 2 * m - mu - 1
        diff ^= low
    return delta


def max_total_hamming(n: int, mu: int) -> int:
    """Unconstrained upper bound: every position balanced."""
    return n * ((mu + 1) // 2) * (mu // 2)
