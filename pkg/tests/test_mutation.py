import random
from fractions import Fraction
from itertools import combinations

import pytest

from divcover.covers import VertexSet, is_cover
from divcover.graph import paper_instance
from divcover.landscape import mutation_distribution, prepad_distribution
from divcover.mutation import jump_and_repair, jump_and_repair_traced, remove_and_repair

from oracles import operator_law


def vs(*vertices, n=8):
    return VertexSet.from_vertices(n, vertices)


def test_removal_subsets_of_v4(g, V):
    """Of the 16 removal sets of V4 exactly one, {5,6}, repairs to V1."""
    producing = [
        set(s)
        for r in range(5)
        for s in combinations(V[4].vertices(), r)
        if remove_and_repair(g, V[4], vs(*s)) == V[1]
    ]
    assert producing == [{5, 6}]


def test_remove_7_8_from_v1(g, V):
    assert remove_and_repair(g, V[1], vs(7, 8)) == vs(1, 2, 4)
    law = mutation_distribution(g, 4, V[1])
    # {7,8} is the only removal set giving {1,2,4}; then v3 is one of 5 pads.
    assert law[V[3]] == Fraction(1, 16) * Fraction(1, 5)


def test_oversize_offspring(g, V):
    y = remove_and_repair(g, V[1], V[1])
    assert y == vs(2, 4, 5, 6, 7, 8) and y.size == 6


def test_empty_removal_is_identity(g, V):
    assert remove_and_repair(g, V[2], VertexSet(8)) == V[2]


def test_removal_must_be_subset(g, V):
    with pytest.raises(ValueError):
        remove_and_repair(g, V[1], vs(3))


def test_preconditions(g, V):
    rng = random.Random(0)
    with pytest.raises(ValueError):
        jump_and_repair(g, 4, vs(1, 2), rng)  # not a cover
    with pytest.raises(ValueError):
        jump_and_repair(g, 3, V[1], rng)  # too large
    with pytest.raises(ValueError):
        jump_and_repair(g, 9, V[1], rng)


def test_deterministic_given_seed(g, V):
    a = [jump_and_repair(g, 4, V[1], random.Random(s)) for s in range(50)]
    b = [jump_and_repair(g, 4, V[1], random.Random(s)) for s in range(50)]
    assert a == b


def test_traced_matches_plain(g, V):
    for s in range(200):
        pre, out = jump_and_repair_traced(g, 4, V[2], random.Random(s))
        assert out == jump_and_repair(g, 4, V[2], random.Random(s))
        assert pre.bits & ~out.bits == 0


@pytest.mark.parametrize("parent", [1, 2, 3, 4])
def test_exact_law_matches_independent_enumeration(g, V, parent):
    ours = mutation_distribution(g, 4, V[parent])
    ref = operator_law(8, sorted(g.edges), 4, set(V[parent].vertices()))
    assert {frozenset(y.vertices()): p for y, p in ours.items()} == ref
    assert sum(ours.values()) == 1


def test_sampler_follows_exact_law(g, V):
    law = mutation_distribution(g, 4, V[1])
    rng = random.Random(12345)
    N = 64_000
    counts = {}
    for _ in range(N):
        y = jump_and_repair(g, 4, V[1], rng)
        counts[y] = counts.get(y, 0) + 1
    assert set(counts) <= set(law)
    for y, p in law.items():
        p = float(p)
        sd = (p * (1 - p) / N) ** 0.5
        assert abs(counts.get(y, 0) / N - p) <= 5 * sd + 1e-9, y


def test_every_prepad_is_cover(g, V):
    for x in V.values():
        assert all(is_cover(g, y) for y in prepad_distribution(g, x))
