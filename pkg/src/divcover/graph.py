"""Undirected simple graphs, the edge-list format, and the local-optimum instance family.

Vertices are labelled ``1..n`` at every public boundary. Internally vertex ``v``
is bit ``v - 1`` of an integer mask, which is what the cover and mutation code
operate on.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

logger = logging.getLogger(__name__)

__all__ = [
    "Graph",
    "GraphParseError",
    "parse_graph",
    "read_graph",
    "serialize_graph",
    "paper_instance",
    "extended_instance",
    "BASE_EDGES",
]

# Edge set of the 8-vertex instance; v3 is isolated.
BASE_EDGES = ((1, 5), (1, 6), (2, 5), (2, 6), (2, 7), (2, 8), (4, 7), (4, 8))


class GraphParseError(ValueError):
    """Raised for malformed edge-list documents; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph on vertices ``1..n``.

    ``edges`` holds normalized pairs ``(u, v)`` with ``u < v``.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    neighbor_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)
    edge_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        edges = frozenset(_normalize(u, v, self.n) for u, v in self.edges)
        masks = [0] * self.n
        for u, v in edges:
            masks[u - 1] |= 1 << (v - 1)
            masks[v - 1] |= 1 << (u - 1)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "neighbor_masks", tuple(masks))
        object.__setattr__(
            self,
            "edge_masks",
            tuple((1 << (u - 1)) | (1 << (v - 1)) for u, v in sorted(edges)),
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> frozenset[int]:
        mask = self.neighbor_masks[v - 1]
        return frozenset(i + 1 for i in range(self.n) if mask >> i & 1)

    def degree(self, v: int) -> int:
        return self.neighbor_masks[v - 1].bit_count()

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def restrict(self, n: int) -> "Graph":
        """Subgraph induced on the first ``n`` vertices."""
        return Graph.from_edges(n, ((u, v) for u, v in self.edges if v <= n))

    def components(self) -> list[frozenset[int]]:
        """Connected components as vertex sets, ordered by smallest member."""
        seen: set[int] = set()
        out = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.neighbors(u):
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out


def _normalize(u: int, v: int, n: int) -> tuple[int, int]:
    if not (1 <= u <= n and 1 <= v <= n):
        raise ValueError(f"edge ({u}, {v}) has an endpoint outside 1..{n}")
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def parse_graph(text: str) -> Graph:
    """Parse a DIMACS-style edge list.

    Comment lines start with ``c``; a single ``p edge <n> <m>`` header precedes the
    ``e <u> <v>`` lines. Duplicate edges are dropped with a warning.
    """
    n = None
    declared_m = 0
    edges: set[tuple[int, int]] = set()
    edge_lines = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphParseError(lineno, "duplicate header")
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphParseError(lineno, "header must be 'p edge <n> <m>'")
            n, declared_m = _ints(parts[2:], lineno)
            if n < 0 or declared_m < 0:
                raise GraphParseError(lineno, "negative count in header")
        elif parts[0] == "e":
            if n is None:
                raise GraphParseError(lineno, "edge before header")
            if len(parts) != 3:
                raise GraphParseError(lineno, "edge line must be 'e <u> <v>'")
            u, v = _ints(parts[1:], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphParseError(lineno, f"vertex index out of range 1..{n}")
            if u == v:
                raise GraphParseError(lineno, f"self-loop at vertex {u}")
            e = (min(u, v), max(u, v))
            if e in edges:
                logger.warning("line %d: duplicate edge %s ignored", lineno, e)
            edges.add(e)
            edge_lines += 1
        else:
            raise GraphParseError(lineno, f"unrecognized line {line!r}")
    if n is None:
        raise GraphParseError(0, "missing 'p edge' header")
    if edge_lines != declared_m:
        logger.warning("header declares %d edges, found %d edge lines", declared_m, edge_lines)
    return Graph(n, frozenset(edges))


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GraphParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def serialize_graph(g: Graph, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def paper_instance() -> Graph:
    """The 8-vertex bipartite graph with a two-member locally optimal population of 4-covers."""
    return Graph(8, frozenset(BASE_EDGES))


def extended_instance(m: int) -> Graph:
    """Base instance plus a disjoint K_{m,m} on vertices ``9..8+2m``.

    Left side is ``9..8+m``, right side ``9+m..8+2m``. Intended cover budget is ``m + 4``.
    """
    if m < 1:
        raise ValueError(f"K_{{m,m}} side size must be >= 1, got {m}")
    left = range(9, 9 + m)
    right = range(9 + m, 9 + 2 * m)
    edges = set(BASE_EDGES) | {(u, v) for u in left for v in right}
    return Graph(8 + 2 * m, frozenset(edges))
