"""Exhaustive ground truth on small instances.

Optimal populations by scanning cover multisets, strict-local-optimum checks
over single replacements, the named locally optimal populations on the 8-vertex
instance and its K_{m,m} extension, and the exact offspring distribution of
jump-and-repair.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import NamedTuple

from divcover.covers import (
    DEFAULT_COVER_BUDGET,
    OracleBudgetError,
    VertexSet,
    enumerate_covers,
    is_cover,
)
from divcover.diversity import Population, replace_delta
from divcover.graph import Graph

__all__ = [
    "LandscapeReport",
    "Optimum",
    "Move",
    "DEFAULT_POPULATION_BUDGET",
    "paper_covers",
    "lemma3_population",
    "lemma4_population",
    "extended_population",
    "optimal_diversity",
    "is_strict_local_optimum",
    "landscape_report",
    "mutation_distribution",
    "prepad_distribution",
    "offspring_distribution",
    "exact_success_probability",
    "Claim",
    "verify_lemmas",
]

DEFAULT_POPULATION_BUDGET = 10**8
N_BASE = 8


def paper_covers(n: int = N_BASE) -> tuple[VertexSet, VertexSet, VertexSet, VertexSet]:
    """The four 4-covers V1..V4 of the base instance, at width ``n``."""
    return (
        VertexSet.from_vertices(n, (1, 2, 7, 8)),
        VertexSet.from_vertices(n, (2, 4, 5, 6)),
        VertexSet.from_vertices(n, (1, 2, 3, 4)),
        VertexSet.from_vertices(n, (5, 6, 7, 8)),
    )


def lemma3_population() -> Population:
    """(V1, V2): diversity 6, locally optimal for mu = 2, k = 4."""
    v1, v2, _, _ = paper_covers()
    return Population([v1, v2])


def lemma4_population(mu: int) -> Population:
    """V1, V2, then ``mu/2 - 1`` copies each of V3 and V4 (in that order)."""
    if mu < 4 or mu % 2:
        raise ValueError(f"mu must be even and >= 4, got {mu}")
    v1, v2, v3, v4 = paper_covers()
    nu = mu // 2 - 1
    return Population([v1, v2] + [v3] * nu + [v4] * nu)


def extended_population(mu: int, m: int) -> Population:
    """:func:`lemma4_population` lifted to ``extended_instance(m)``.

    Members at even list positions take the left side ``9..8+m`` of K_{m,m},
    odd positions the right side, so every added vertex has count ``mu/2``.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    base = lemma4_population(mu)
    n = N_BASE + 2 * m
    left = list(range(9, 9 + m))
    right = list(range(9 + m, 9 + 2 * m))
    return Population(
        VertexSet.from_vertices(n, x.vertices() + (left if j % 2 == 0 else right))
        for j, x in enumerate(base)
    )


class Optimum(NamedTuple):
    value: int
    witnesses: list[Population]
    count: int  # exact number of optimal multisets, even past the witness cap


class Move(NamedTuple):
    index: int
    cover: VertexSet
    delta: int


def optimal_diversity(
    g: Graph,
    k: int,
    mu: int,
    *,
    covers: list[VertexSet] | None = None,
    cover_budget: int = DEFAULT_COVER_BUDGET,
    population_budget: int = DEFAULT_POPULATION_BUDGET,
    witness_cap: int = 100,
) -> Optimum:
    """Maximum total Hamming distance over all ``mu``-multisets of covers of size <= ``k``.

    Covers smaller than ``k`` are part of the ground set. Witnesses come out in
    canonical order (multisets of the bitstring-sorted cover list).
    """
    if covers is None:
        covers = enumerate_covers(g, k, budget=cover_budget)
    if not covers:
        raise ValueError(f"no cover of size <= {k} exists")
    total = math.comb(len(covers) + mu - 1, mu)
    if total > population_budget:
        raise OracleBudgetError(
            f"scanning {total} populations exceeds the budget {population_budget}; "
            "shrink the instance, k or mu"
        )
    c = len(covers)
    dist = [[(a.bits ^ b.bits).bit_count() for b in covers] for a in covers]
    best, found, count = -1, [], 0
    for combo in combinations_with_replacement(range(c), mu):
        d = 0
        for a in range(mu):
            row = dist[combo[a]]
            for b in range(a + 1, mu):
                d += row[combo[b]]
        if d > best:
            best, found, count = d, [combo], 1
        elif d == best:
            count += 1
            if len(found) < witness_cap:
                found.append(combo)
    return Optimum(best, [Population(covers[i] for i in combo) for combo in found], count)


def is_strict_local_optimum(
    g: Graph,
    k: int,
    p: Population,
    *,
    covers: list[VertexSet] | None = None,
    cover_budget: int = DEFAULT_COVER_BUDGET,
) -> tuple[bool, Move]:
    """Whether every replacement of one member by a different feasible cover lowers diversity.

    Also returns the best single replacement found (largest delta).
    """
    if covers is None:
        covers = enumerate_covers(g, k, budget=cover_budget)
    for x in p:
        if x.size > k or not is_cover(g, x):
            raise ValueError(f"member {x} is not a feasible {k}-cover")
    best: Move | None = None
    for j, x in enumerate(p):
        for c in covers:
            if c == x:
                continue
            d = replace_delta(p, j, c)
            if best is None or d > best.delta:
                best = Move(j, c, d)
    if best is None:
        # Only one feasible cover: no move exists, vacuously optimal.
        return True, Move(-1, p[0], 0)
    return best.delta < 0, best


@dataclass
class LandscapeReport:
    instance_id: str
    k: int
    mu: int
    feasible_cover_count: int
    optimal_diversity: int
    optimal_count: int
    optimal_witnesses: list[Population] = field(default_factory=list)
    checked_population: Population | None = None
    is_strict_local_optimum: bool | None = None
    best_move: Move | None = None

    def to_json(self) -> dict:
        out = {
            "instance_id": self.instance_id,
            "k": self.k,
            "mu": self.mu,
            "feasible_cover_count": self.feasible_cover_count,
            "optimal_diversity": self.optimal_diversity,
            "optimal_count": self.optimal_count,
            "optimal_witnesses": [w.to_json()["members"] for w in self.optimal_witnesses],
            "checked_population": None,
        }
        if self.checked_population is not None:
            out["checked_population"] = {
                **self.checked_population.to_json(),
                "is_strict_local_optimum": self.is_strict_local_optimum,
                "best_move": {
                    "index": self.best_move.index,
                    "cover": self.best_move.cover.vertices(),
                    "delta": self.best_move.delta,
                },
            }
        return out


def landscape_report(
    g: Graph,
    k: int,
    mu: int,
    instance_id: str = "",
    check: Population | None = None,
    **budgets,
) -> LandscapeReport:
    covers = enumerate_covers(g, k, budget=budgets.get("cover_budget", DEFAULT_COVER_BUDGET))
    opt = optimal_diversity(
        g, k, mu, covers=covers,
        population_budget=budgets.get("population_budget", DEFAULT_POPULATION_BUDGET),
        witness_cap=budgets.get("witness_cap", 100),
    )
    report = LandscapeReport(instance_id, k, mu, len(covers), opt.value, opt.count, opt.witnesses)
    if check is not None:
        ok, move = is_strict_local_optimum(g, k, check, covers=covers)
        report.checked_population = check
        report.is_strict_local_optimum = ok
        report.best_move = move
    return report


# --- exact operator distributions -------------------------------------------------


def prepad_distribution(g: Graph, x: VertexSet) -> dict[VertexSet, Fraction]:
    """Exact law of the removal+repair result, before padding (all ``2^|x|`` removal sets)."""
    verts = x.vertices()
    w = Fraction(1, 2 ** len(verts))
    out: dict[VertexSet, Fraction] = defaultdict(Fraction)
    for r in range(len(verts) + 1):
        for removed in combinations(verts, r):
            y = set(verts) - set(removed)
            for v in removed:
                y |= g.neighbors(v)
            out[VertexSet.from_vertices(g.n, y)] += w
    return dict(out)


def _pad_distribution(g: Graph, y: VertexSet, k: int) -> dict[VertexSet, Fraction]:
    if y.size >= k:
        return {y: Fraction(1)}
    absent = [v for v in g.vertices if v not in y]
    out: dict[VertexSet, Fraction] = defaultdict(Fraction)
    for z in absent:
        for res, p in _pad_distribution(g, y.with_vertex(z), k).items():
            out[res] += p / len(absent)
    return dict(out)


def mutation_distribution(g: Graph, k: int, x: VertexSet) -> dict[VertexSet, Fraction]:
    """Exact law of jump-and-repair applied to ``x`` (removal sets and padding sequences)."""
    out: dict[VertexSet, Fraction] = defaultdict(Fraction)
    for pre, p in prepad_distribution(g, x).items():
        for y, q in _pad_distribution(g, pre, k).items():
            out[y] += p * q
    return dict(out)


def offspring_distribution(g: Graph, k: int, p: Population) -> dict[VertexSet, Fraction]:
    """Law of one offspring: uniform parent, then jump-and-repair."""
    out: dict[VertexSet, Fraction] = defaultdict(Fraction)
    per_parent = {}
    for x in p:
        if x not in per_parent:
            per_parent[x] = mutation_distribution(g, k, x)
        for y, q in per_parent[x].items():
            out[y] += q / len(p)
    return dict(out)


def exact_success_probability(g: Graph, k: int, start: Population, target: int) -> Fraction:
    """Probability that one batch of ``mu`` independent offspring of ``start`` is all
    feasible with diversity at least ``target``."""
    mu = len(start)
    dist = {y: q for y, q in offspring_distribution(g, k, start).items() if y.size <= k}
    support = sorted(dist, key=VertexSet.sort_key)
    total = Fraction(0)
    for combo in combinations_with_replacement(support, mu):
        if Population(combo).diversity < target:
            continue
        mult = Counter(combo)
        ways = math.factorial(mu)
        prob = Fraction(1)
        for y, c in mult.items():
            ways //= math.factorial(c)
            prob *= dist[y] ** c
        total += ways * prob
    return total


# --- claim table ------------------------------------------------------------------


class Claim(NamedTuple):
    name: str
    passed: bool
    detail: str


def verify_lemmas() -> list[Claim]:
    """Exhaustively check every structural claim about the 8-vertex instance and its extension."""
    from divcover.graph import extended_instance, paper_instance
    from divcover.covers import is_non_excessive
    from divcover.diversity import hamming

    g = paper_instance()
    v1, v2, v3, v4 = paper_covers()
    covers = enumerate_covers(g, 4)
    fmt = lambda cs: "[" + ", ".join(map(str, cs)) + "]"  # noqa: E731
    out: list[Claim] = []

    small = [c for c in covers if c.size <= 2]
    out.append(Claim("no cover of size <= 2", not small, f"found {fmt(small)}"))
    three = [c for c in covers if c.size == 3]
    out.append(Claim(
        "{1,2,4} is the unique 3-cover",
        three == [VertexSet.from_vertices(8, (1, 2, 4))],
        f"3-covers {fmt(three)}",
    ))
    with3 = [c for c in covers if 3 in c]
    out.append(Claim("V3 is the unique <=4-cover containing v3", with3 == [v3], f"{fmt(with3)}"))
    no2 = [c for c in covers if 2 not in c]
    out.append(Claim("V4 is the unique <=4-cover avoiding v2", no2 == [v4], f"{fmt(no2)}"))
    out.append(Claim("9 covers of size <= 4", len(covers) == 9, f"count {len(covers)}"))

    nonexc = [is_non_excessive(g, x) for x in (v1, v2, v3, v4)]
    out.append(Claim(
        "V1, V2, V4 non-excessive; V3 excessive",
        nonexc == [True, True, False, True],
        f"flags {nonexc}",
    ))
    out.append(Claim("H(V1,V2) = 6", hamming(v1, v2) == 6, f"{hamming(v1, v2)}"))
    out.append(Claim("H(V3,V4) = 8", hamming(v3, v4) == 8, f"{hamming(v3, v4)}"))
    opt = optimal_diversity(g, 4, 2, covers=covers)
    unique = opt.count == 1 and opt.witnesses[0].multiset() == Population([v3, v4]).multiset()
    out.append(Claim(
        "mu=2 optimum is 8, uniquely (V3,V4)",
        opt.value == 8 and unique,
        f"D* = {opt.value}, {opt.count} optimal multiset(s)",
    ))
    ok, move = is_strict_local_optimum(g, 4, lemma3_population(), covers=covers)
    out.append(Claim("(V1,V2) strict local optimum", ok, f"best single move delta {move.delta}"))

    pre = prepad_distribution(g, v4)
    hits = [p for y, p in pre.items() if y == v1]
    out.append(Claim(
        "removal+repair V4 -> V1 has probability exactly 2^-4",
        hits == [Fraction(1, 16)],
        f"P = {hits[0] if hits else 0}",
    ))

    for mu in (4, 6):
        p = lemma4_population(mu)
        ok, move = is_strict_local_optimum(g, 4, p, covers=covers)
        best = optimal_diversity(g, 4, mu, covers=covers).value
        out.append(Claim(
            f"mu={mu} population strict local optimum",
            ok,
            f"best single move delta {move.delta}",
        ))
        out.append(Claim(
            f"mu={mu} population sub-optimal",
            p.diversity < best,
            f"D = {p.diversity} < D* = {best}",
        ))
    for m in (1, 2):
        gm = extended_instance(m)
        ok, move = is_strict_local_optimum(gm, m + 4, extended_population(4, m))
        out.append(Claim(
            f"K_{{{m},{m}}} extension, mu=4: strict local optimum",
            ok,
            f"n = {gm.n}, k = {m + 4}, best single move delta {move.delta}",
        ))
    return out
