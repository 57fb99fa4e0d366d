"""Reference computations that share no code with the package under test.

Everything here works on plain Python sets and Fractions.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import combinations, product


def brute_is_cover(edges, s) -> bool:
    return all(u in s or v in s for u, v in edges)


def brute_covers(n, edges, k):
    """Every subset of 1..n of size <= k that covers ``edges`` (full subset scan)."""
    out = []
    for mask in range(1 << n):
        s = {i + 1 for i in range(n) if mask >> i & 1}
        if len(s) <= k and brute_is_cover(edges, s):
            out.append(frozenset(s))
    return out


def brute_pairwise(members) -> int:
    return sum(len(set(a) ^ set(b)) for a, b in combinations(members, 2))


def neighbours(n, edges):
    nb = {v: set() for v in range(1, n + 1)}
    for u, v in edges:
        nb[u].add(v)
        nb[v].add(u)
    return nb


def operator_law(n, edges, k, x):
    """Exact output law of remove-half / add-neighbours / pad-uniformly, by enumeration."""
    nb = neighbours(n, edges)
    x = sorted(x)
    out = defaultdict(Fraction)

    def pad(y, p):
        if len(y) >= k:
            out[frozenset(y)] += p
            return
        absent = [v for v in range(1, n + 1) if v not in y]
        for z in absent:
            pad(y | {z}, p / len(absent))

    for r in range(len(x) + 1):
        for removed in combinations(x, r):
            y = set(x) - set(removed)
            for v in removed:
                y |= nb[v]
            pad(y, Fraction(1, 2 ** len(x)))
    return dict(out)


def _key(pop):
    return tuple(sorted(tuple(sorted(s)) for s in pop))


def _transitions(n, edges, k, pop, algorithm):
    mu = len(pop)
    feasible = lambda s: len(s) <= k and brute_is_cover(edges, s)  # noqa: E731
    fitness = lambda s: 0 if feasible(s) else -(len(s) - k)  # noqa: E731  (offspring are covers)
    q = defaultdict(Fraction)
    for x in pop:
        for y, p in operator_law(n, edges, k, x).items():
            q[y] += p / mu
    res = defaultdict(Fraction)
    for kids in product(q.items(), repeat=mu):
        p = Fraction(1)
        for _, pp in kids:
            p *= pp
        ks = [y for y, _ in kids]
        if algorithm == "one_mu_one_mu":
            if all(feasible(y) for y in ks) and brute_pairwise(ks) >= brute_pairwise(pop):
                res[_key(ks)] += p
            else:
                res[_key(pop)] += p
            continue
        pool = list(pop) + ks
        fit = [fitness(s) for s in pool]
        alive = list(range(len(pool)))
        while True:
            w = min(fit[i] for i in alive)
            worst = [i for i in alive if fit[i] == w]
            if len(alive) - len(worst) < mu:
                break
            alive = [i for i in alive if fit[i] != w]
        r = len(alive) - mu
        if r == 0:
            res[_key([pool[i] for i in alive])] += p
            continue
        best, winners = None, []
        for drop in combinations(worst, r):
            surv = [pool[i] for i in alive if i not in drop]
            d = brute_pairwise(surv)
            if best is None or d > best:
                best, winners = d, [surv]
            elif d == best:
                winners.append(surv)
        for s in winners:
            res[_key(s)] += p / len(winners)
    return res


def _solve(a, b):
    """Gauss-Jordan over Fractions."""
    m = len(b)
    a = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(m):
        piv = next(r for r in range(col, m) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [row[-1] for row in a]


def expected_hitting_time(n, edges, k, start, target, algorithm):
    """Exact E[T] for reaching diversity ``target`` from ``start`` (mu = len(start)).

    Returns (E[T], {state: per-iteration success probability}).
    """
    start = _key(start)
    states, table, i = [start], {}, 0
    while i < len(states):
        s = states[i]
        i += 1
        if brute_pairwise(s) >= target:
            continue
        table[s] = _transitions(n, edges, k, [frozenset(x) for x in s], algorithm)
        for t in table[s]:
            if t not in states:
                states.append(t)
    transient = [s for s in states if s in table]
    idx = {s: j for j, s in enumerate(transient)}
    a = [[Fraction(0)] * len(transient) for _ in transient]
    for s in transient:
        a[idx[s]][idx[s]] += 1
        for t, p in table[s].items():
            if t in idx:
                a[idx[s]][idx[t]] -= p
    sol = _solve(a, [Fraction(1)] * len(transient))
    success = {s: sum((p for t, p in table[s].items() if t not in idx), Fraction(0)) for s in transient}
    return sol[idx[start]], success
