"""Diversity-optimizing EAs on k-vertex cover: (mu+1), (mu+lambda) and (1_mu+1_mu).

All three use jump-and-repair as the only variation operator and pick parents
uniformly at random. Feasibility (a cover of size at most ``k``) is encoded as
``capped_fitness == 0``; negative values grade infeasible individuals.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable

from divcover.covers import VertexSet, initial_cover
from divcover.diversity import Population, diversity_from_counts
from divcover.graph import Graph, paper_instance, read_graph
from divcover.mutation import mutate_bits

__all__ = [
    "ALGORITHMS",
    "RunConfig",
    "TrialRecord",
    "InfeasibleInstanceError",
    "capped_fitness",
    "step_mu_plus_one",
    "step_mu_plus_lambda",
    "step_one_mu_one_mu",
    "auto_population",
    "run",
    "CSV_FIELDS",
]

ALGORITHMS = ("mu_plus_one", "mu_plus_lambda", "one_mu_one_mu")
CSV_FIELDS = (
    "seed", "algorithm", "mu", "lambda", "k",
    "hitting_time", "final_diversity", "iterations_run", "accepted_count",
)


class InfeasibleInstanceError(RuntimeError):
    """No cover of size at most k could be found to seed a run."""


@dataclass
class RunConfig:
    graph: Graph
    k: int
    mu: int
    algorithm: str = "one_mu_one_mu"
    lam: int = 1
    budget: int = 100_000
    seed: int = 0
    target_diversity: int | None = None
    subset_budget: int = 100_000
    graph_path: str | None = None
    _ctx: "_Problem | None" = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.mu < 1:
            raise ValueError("mu must be >= 1")
        if self.lam < 1:
            raise ValueError("lambda must be >= 1")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if not 0 < self.k <= self.graph.n:
            raise ValueError(f"k must lie in 1..{self.graph.n}")

    @property
    def problem(self) -> "_Problem":
        if self._ctx is None:
            self._ctx = _Problem(self.graph, self.k)
        return self._ctx

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "k": self.k,
            "mu": self.mu,
            "lambda": self.lam,
            "budget": self.budget,
            "seed": self.seed,
            "target_diversity": self.target_diversity,
            "graph_path": self.graph_path,
        }

    @classmethod
    def from_json(cls, data: dict, base_dir: str | None = None) -> "RunConfig":
        """Build a config from its JSON form.

        ``graph_path`` is resolved against ``base_dir``; when it is missing or
        null the 8-vertex base instance is used.
        """
        path = data.get("graph_path")
        if path:
            full = path if base_dir is None or os.path.isabs(path) else os.path.join(base_dir, path)
            graph = read_graph(full)
        else:
            graph = paper_instance()
        return cls(
            graph=graph,
            k=int(data["k"]),
            mu=int(data["mu"]),
            algorithm=data.get("algorithm", "one_mu_one_mu"),
            lam=int(data.get("lambda") or 1),
            budget=int(data.get("budget", 100_000)),
            seed=int(data.get("seed", 0)),
            target_diversity=data.get("target_diversity"),
            subset_budget=int(data.get("subset_budget", 100_000)),
            graph_path=path,
        )


@dataclass
class TrialRecord:
    seed: int
    algorithm: str
    mu: int
    lam: int
    k: int
    hitting_time: int | None  # None: target never reached within budget
    final_diversity: int
    iterations_run: int
    accepted_count: int

    def to_json(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {f: d[f] for f in CSV_FIELDS}

    def csv_row(self) -> list[str]:
        d = self.to_json()
        return ["inf" if d[f] is None else str(d[f]) for f in CSV_FIELDS]

    @classmethod
    def from_csv_row(cls, row: dict) -> "TrialRecord":
        ht = row["hitting_time"]
        return cls(
            seed=int(row["seed"]),
            algorithm=row["algorithm"],
            mu=int(row["mu"]),
            lam=int(row["lambda"]),
            k=int(row["k"]),
            hitting_time=None if ht == "inf" else int(ht),
            final_diversity=int(row["final_diversity"]),
            iterations_run=int(row["iterations_run"]),
            accepted_count=int(row["accepted_count"]),
        )


class _Problem:
    """Per-instance constants plus a memo of capped fitness by bitmask."""

    def __init__(self, graph: Graph, k: int):
        self.graph = graph
        self.n = graph.n
        self.k = k
        self.nbrs = graph.neighbor_masks
        self.edge_masks = graph.edge_masks
        self._fit: dict[int, int] = {}

    def fitness(self, bits: int) -> int:
        f = self._fit.get(bits)
        if f is None:
            uncovered = sum(1 for em in self.edge_masks if not bits & em)
            f = -(uncovered * (self.n + 1) + max(0, bits.bit_count() - self.k))
            if len(self._fit) < 1 << 20:
                self._fit[bits] = f
        return f

    def mutate(self, bits: int, rng) -> int:
        return mutate_bits(self.nbrs, self.n, self.k, bits, rng)


def capped_fitness(g: Graph, k: int, s: VertexSet) -> int:
    """``min(f, B)`` with ``B = 0``: zero iff ``s`` is a cover of size at most ``k``.

    Below the threshold each uncovered edge costs ``n + 1`` and each vertex over
    ``k`` costs one, so coverage dominates size.
    """
    if s.n != g.n:
        raise ValueError(f"width mismatch: {s.n} vs {g.n}")
    return _Problem(g, k).fitness(s.bits)


def _pool_counts(counts: list[int], extra_bits) -> list[int]:
    c = list(counts)
    for b in extra_bits:
        while b:
            low = b & -b
            c[low.bit_length() - 1] += 1
            b ^= low
    return c


def step_mu_plus_one(pop: Population, cfg: RunConfig, rng) -> tuple[Population, bool]:
    """One (mu+1) iteration; ``pop`` is updated in place.

    The returned flag is true iff the offspring survived selection.
    """
    prob = cfg.problem
    members = pop.members
    mu = len(members)
    parent = members[rng.randrange(mu)].bits
    y = prob.mutate(parent, rng)
    gy = prob.fitness(y)
    fits = [prob.fitness(x.bits) for x in members]
    if gy < min(fits):
        return pop, False
    fits.append(gy)
    worst = min(fits)
    pool = [x.bits for x in members]
    pool.append(y)
    size = mu + 1
    counts = _pool_counts(pop.counts, (y,))
    base = sum(counts)
    # Smallest contribution == removal leaves the largest diversity.
    best, cands = None, []
    for i, fi in enumerate(fits):
        if fi != worst:
            continue
        contrib = base
        b = pool[i]
        while b:
            low = b & -b
            contrib += size - 2 * counts[low.bit_length() - 1]
            b ^= low
        if best is None or contrib < best:
            best, cands = contrib, [i]
        elif contrib == best:
            cands.append(i)
    if len(cands) >= 2 and cands[-1] == mu:
        cands.pop()
    out = cands[0] if len(cands) == 1 else cands[rng.randrange(len(cands))]
    if out == mu:
        return pop, False
    pop.replace(out, VertexSet(pop.n, y))
    return pop, True


def _select_subset(pool, alive_idx, worst_idx, r, mu, n, subset_budget, rng):
    """Indices (into ``pool``) to drop: ``r`` of ``worst_idx`` maximizing survivor diversity."""
    counts = _pool_counts([0] * n, (pool[i] for i in alive_idx))
    if math.comb(len(worst_idx), r) <= subset_budget:
        best, winners = None, []
        for drop in combinations(worst_idx, r):
            c = list(counts)
            for i in drop:
                b = pool[i]
                while b:
                    low = b & -b
                    c[low.bit_length() - 1] -= 1
                    b ^= low
            d = diversity_from_counts(c, mu)
            if best is None or d > best:
                best, winners = d, [drop]
            elif d == best:
                winners.append(drop)
        return set(winners[0] if len(winners) == 1 else winners[rng.randrange(len(winners))])
    # Greedy backward elimination inside the worst stratum.
    dropped: set[int] = set()
    remaining = list(worst_idx)
    size = len(alive_idx)
    for _ in range(r):
        base = sum(counts)
        best, cands = None, []
        for i in remaining:
            contrib = base
            b = pool[i]
            while b:
                low = b & -b
                contrib += size - 2 * counts[low.bit_length() - 1]
                b ^= low
            if best is None or contrib < best:
                best, cands = contrib, [i]
            elif contrib == best:
                cands.append(i)
        out = cands[0] if len(cands) == 1 else cands[rng.randrange(len(cands))]
        remaining.remove(out)
        dropped.add(out)
        b = pool[out]
        while b:
            low = b & -b
            counts[low.bit_length() - 1] -= 1
            b ^= low
        size -= 1
    return dropped


def step_mu_plus_lambda(pop: Population, cfg: RunConfig, rng) -> tuple[Population, bool]:
    """One (mu+lambda) iteration; the flag is true iff some offspring survived.

    Worst-fitness strata are discarded whole while at least ``mu`` individuals
    would remain. The remaining surplus is removed from the worst stratum as the
    subset whose removal leaves the most diverse survivors: exhaustively when
    the number of candidate subsets is within ``cfg.subset_budget``, otherwise
    by greedy elimination of the smallest contributor.
    """
    prob = cfg.problem
    members = pop.members
    mu = len(members)
    pool = [x.bits for x in members]
    for _ in range(cfg.lam):
        pool.append(prob.mutate(members[rng.randrange(mu)].bits, rng))
    fits = [prob.fitness(b) for b in pool]
    alive = list(range(len(pool)))
    while True:
        worst = min(fits[i] for i in alive)
        worst_idx = [i for i in alive if fits[i] == worst]
        if len(alive) - len(worst_idx) < mu:
            break
        alive = [i for i in alive if fits[i] != worst]
    r = len(alive) - mu
    if r > 0:
        drop = _select_subset(pool, alive, worst_idx, r, mu, pop.n, cfg.subset_budget, rng)
        alive = [i for i in alive if i not in drop]
    accepted = any(i >= mu for i in alive)
    if accepted:
        pop.set_members([VertexSet(pop.n, pool[i]) for i in alive])
    return pop, accepted


def step_one_mu_one_mu(pop: Population, cfg: RunConfig, rng) -> tuple[Population, bool]:
    """One (1_mu+1_mu) iteration: a whole offspring population replaces ``pop``
    iff every offspring is feasible and diversity does not drop."""
    prob = cfg.problem
    members = pop.members
    mu = len(members)
    kids = [prob.mutate(members[rng.randrange(mu)].bits, rng) for _ in range(mu)]
    if any(prob.fitness(b) < 0 for b in kids):
        return pop, False
    counts = _pool_counts([0] * pop.n, kids)
    if diversity_from_counts(counts, mu) < pop.diversity:
        return pop, False
    pop.members = [VertexSet(pop.n, b) for b in kids]
    pop.counts = counts
    return pop, True


_STEPS = {
    "mu_plus_one": step_mu_plus_one,
    "mu_plus_lambda": step_mu_plus_lambda,
    "one_mu_one_mu": step_one_mu_one_mu,
}


def auto_population(g: Graph, k: int, mu: int, rng, budget: int = 10_000) -> Population:
    """``mu`` copies of one cover, padded to exactly ``k`` with uniformly chosen absent vertices."""
    x = initial_cover(g, k, rng, budget=budget)
    if x is None:
        raise InfeasibleInstanceError(f"no cover of size <= {k} found; instance may be infeasible")
    bits = x.bits
    absent = [i for i in range(g.n) if not bits >> i & 1]
    for _ in range(k - x.size):
        bits |= 1 << absent.pop(rng.randrange(len(absent)))
    return Population([VertexSet(g.n, bits)] * mu)


def run(
    cfg: RunConfig,
    initial: Population | None = None,
    on_accept: Callable[[int, Population], None] | None = None,
) -> tuple[TrialRecord, Population]:
    """Iterate the configured algorithm until the budget is spent or the target is hit.

    ``initial=None`` builds the start population with :func:`auto_population`
    from the run's own random stream. The hitting time is the 1-based iteration
    after which every member is feasible and the diversity reaches
    ``cfg.target_diversity`` (0 if the start already qualifies).
    ``on_accept(t, pop)`` is called after every accepted iteration.
    """
    rng = random.Random(cfg.seed)
    prob = cfg.problem
    if initial is None:
        pop = auto_population(cfg.graph, cfg.k, cfg.mu, rng)
    else:
        pop = initial.copy()
    if pop.n != cfg.graph.n:
        raise ValueError(f"population width {pop.n} does not match graph order {cfg.graph.n}")
    if pop.mu != cfg.mu:
        raise ValueError(f"population has {pop.mu} members, config says mu = {cfg.mu}")
    if cfg.algorithm == "one_mu_one_mu" and any(prob.fitness(x.bits) < 0 for x in pop):
        raise ValueError("(1_mu+1_mu) needs a start population of feasible covers")
    step = _STEPS[cfg.algorithm]
    target = cfg.target_diversity

    def hit() -> bool:
        return pop.diversity >= target and all(prob.fitness(x.bits) == 0 for x in pop.members)

    hitting_time = 0 if target is not None and hit() else None
    t = accepted_count = 0
    while hitting_time is None and t < cfg.budget:
        t += 1
        _, accepted = step(pop, cfg, rng)
        if accepted:
            accepted_count += 1
            if on_accept is not None:
                on_accept(t, pop)
            if target is not None and hit():
                hitting_time = t
    record = TrialRecord(
        seed=cfg.seed,
        algorithm=cfg.algorithm,
        mu=cfg.mu,
        lam=cfg.lam,
        k=cfg.k,
        hitting_time=hitting_time,
        final_diversity=pop.diversity,
        iterations_run=t,
        accepted_count=accepted_count,
    )
    return record, pop
