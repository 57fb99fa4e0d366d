"""Jump-and-repair mutation for k-vertex covers.

Random-stream contract (fixed so runs are reproducible): a single
``rng.getrandbits(|x|)`` call supplies one coin per vertex of the parent, bit
``j`` deciding the ``j``-th smallest vertex; then each padding step draws
``rng.randrange(len(absent))`` to index the ascending list of absent vertices.
No draws are made for an empty parent or when no padding is needed.
"""

from __future__ import annotations

from divcover.covers import VertexSet, is_cover
from divcover.graph import Graph

__all__ = ["jump_and_repair", "jump_and_repair_traced", "remove_and_repair", "mutate_bits"]


def _remove_repair(nbrs, bits: int, removal: int) -> int:
    added = 0
    r = removal
    while r:
        low = r & -r
        added |= nbrs[low.bit_length() - 1]
        r ^= low
    return (bits & ~removal) | added


def _removal_from_coins(bits: int, coins: int) -> int:
    removal = 0
    b = bits
    while coins:
        low = b & -b
        if coins & 1:
            removal |= low
        coins >>= 1
        b ^= low
    return removal


def _pad(y: int, n: int, need: int, rng) -> int:
    absent = [i for i in range(n) if not y >> i & 1]
    for _ in range(need):
        y |= 1 << absent.pop(rng.randrange(len(absent)))
    return y


def _prepad(nbrs, bits: int, rng) -> int:
    size = bits.bit_count()
    if not size:
        return bits
    coins = rng.getrandbits(size)
    if not coins:
        return bits
    return _remove_repair(nbrs, bits, _removal_from_coins(bits, coins))


def mutate_bits(nbrs, n: int, k: int, bits: int, rng) -> int:
    """Integer-mask kernel of :func:`jump_and_repair`; no argument checking."""
    y = _prepad(nbrs, bits, rng)
    short = k - y.bit_count()
    if short > 0:
        y = _pad(y, n, short, rng)
    return y


def _check(g: Graph, k: int, x: VertexSet) -> None:
    if not 0 < k <= g.n:
        raise ValueError(f"k must lie in 1..{g.n}, got {k}")
    if not is_cover(g, x):
        raise ValueError(f"parent {x} is not a cover")
    if x.size > k:
        raise ValueError(f"parent {x} has size {x.size} > k = {k}")


def jump_and_repair(g: Graph, k: int, x: VertexSet, rng) -> VertexSet:
    """Mutate the cover ``x`` (``|x| <= k``) into another cover.

    Each vertex of ``x`` is dropped with probability 1/2, all neighbours of
    dropped vertices are added back, and while the result is smaller than
    ``k`` a uniformly random absent vertex is added. The result can exceed
    ``k`` when the repair adds many vertices; it is returned untruncated.
    """
    _check(g, k, x)
    return VertexSet(g.n, mutate_bits(g.neighbor_masks, g.n, k, x.bits, rng))


def jump_and_repair_traced(g: Graph, k: int, x: VertexSet, rng) -> tuple[VertexSet, VertexSet]:
    """Like :func:`jump_and_repair` but also returns the set before padding.

    Consumes the random stream identically to :func:`jump_and_repair`.
    """
    _check(g, k, x)
    pre = _prepad(g.neighbor_masks, x.bits, rng)
    short = k - pre.bit_count()
    out = _pad(pre, g.n, short, rng) if short > 0 else pre
    return VertexSet(g.n, pre), VertexSet(g.n, out)


def remove_and_repair(g: Graph, x: VertexSet, removal: VertexSet) -> VertexSet:
    """Deterministic removal+repair step: ``(x - removal)`` plus all neighbours of ``removal``."""
    if removal.bits & ~x.bits:
        raise ValueError(f"removal set {removal} is not a subset of {x}")
    return VertexSet(g.n, _remove_repair(g.neighbor_masks, x.bits, removal.bits))
