"""Acceptance gate. Each criterion appends one PASS/FAIL line to the terminal summary."""

import functools
from fractions import Fraction
import math
import random
import statistics
from itertools import combinations

import pytest

import test_properties
from conftest import ACCEPTANCE_LINES
from divcover.algorithms import RunConfig, run
from divcover.cli import main
from divcover.covers import VertexSet, enumerate_covers
from divcover.diversity import Population
from divcover.graph import extended_instance, paper_instance
from divcover.harness import ExperimentSpec, dominance_report, estimate_prepad_hit, run_experiment
from divcover.landscape import (
    extended_population,
    is_strict_local_optimum,
    lemma3_population,
    lemma4_population,
    optimal_diversity,
    paper_covers,
)
from divcover.mutation import remove_and_repair

from oracles import expected_hitting_time

TRIALS = 200
BUDGET = 100_000
WINDOW = (400, 1000)


def verdict(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"{criterion:<36} {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@functools.lru_cache(maxsize=None)
def escape_records(algorithm: str):
    cfg = RunConfig(paper_instance(), 4, 2, algorithm, lam=2, budget=BUDGET, target_diversity=8)
    return run_experiment(ExperimentSpec(cfg, TRIALS, seed_base=0, start="lemma3_pair"))


@functools.lru_cache(maxsize=None)
def exact_chain(algorithm: str):
    g = paper_instance()
    return expected_hitting_time(8, sorted(g.edges), 4, [set(x.vertices()) for x in lemma3_population()], 8,
                                 algorithm)


def finite_times(records):
    return [r.hitting_time for r in records if r.hitting_time is not None]


def test_c1_small_covers(capsys):
    g = paper_instance()
    covers = enumerate_covers(g, 4)
    V1, V2, V3, V4 = paper_covers()
    three = [c for c in covers if c.size == 3]
    checks = {
        "none <= 2": not [c for c in covers if c.size <= 2],
        "unique 3-cover {1,2,4}": three == [VertexSet.from_vertices(8, [1, 2, 4])],
        "V3 only with v3": [c for c in covers if 3 in c] == [V3],
        "V4 only without v2": [c for c in covers if 2 not in c] == [V4],
        "9 covers": len(covers) == 9,
        "verify-lemmas exit 0": main(["verify-lemmas"]) == 0,
    }
    capsys.readouterr()
    bad = [k for k, v in checks.items() if not v]
    verdict("C1 cover structure", not bad, "all exact checks hold" if not bad else f"failed: {bad}")


def test_c2_pair_landscape(g):
    opt = optimal_diversity(g, 4, 2)
    V1, V2, V3, V4 = paper_covers()
    ok_opt = opt.value == 8 and opt.count == 1 and opt.witnesses[0].same_multiset(Population([V3, V4]))
    start = lemma3_population()
    strict, move = is_strict_local_optimum(g, 4, start)
    ok = ok_opt and start.diversity == 6 and strict and move.delta < 0
    verdict("C2 pair local optimum", ok,
            f"optimum {opt.value} ({opt.count} witness), D(V1,V2) = {start.diversity}, best move delta {move.delta}")


@pytest.mark.parametrize("mu", [4, 6])
def test_c3_larger_populations(g, mu):
    p = lemma4_population(mu)
    strict, move = is_strict_local_optimum(g, 4, p)
    opt = optimal_diversity(g, 4, mu).value
    expected = {4: 30, 6: 70}[mu]
    ok = strict and p.diversity == expected and p.diversity < opt
    verdict(f"C3 mu={mu} local optimum", ok, f"D = {p.diversity} < optimum {opt}, best move delta {move.delta}")


@pytest.mark.parametrize("m", [1, 2])
def test_c4_extension(m):
    g = extended_instance(m)
    k = m + 4
    p = extended_population(4, m)
    strict, move = is_strict_local_optimum(g, k, p, covers=enumerate_covers(g, k))
    verdict(f"C4 K_{{{m},{m}}} extension", strict,
            f"n = {g.n}, k = {k}, D = {p.diversity}, best move delta {move.delta}")


def test_c5_mu_plus_one_stagnates(g):
    start = lemma3_population()
    stuck = 0
    for seed in range(50):
        moved = []

        def check(t, pop):
            if not pop.same_multiset(start):
                moved.append(t)

        cfg = RunConfig(g, 4, 2, "mu_plus_one", budget=BUDGET, seed=seed)
        rec, final = run(cfg, start, on_accept=check)
        stuck += not moved and final.same_multiset(start)
    verdict("C5 (mu+1) stagnation", stuck == 50, f"{stuck}/50 runs kept the start multiset at every accepted step")


@pytest.mark.parametrize("algorithm", ["one_mu_one_mu", "mu_plus_lambda"])
def test_c6_escape_window(algorithm):
    recs = escape_records(algorithm)
    times = finite_times(recs)
    frac = len(times) / len(recs)
    mean = statistics.fmean(times) if times else math.inf
    ok = frac >= 0.99 and WINDOW[0] <= mean <= WINDOW[1]
    verdict(f"C6 escape [{algorithm}]", ok,
            f"finite {len(times)}/{len(recs)}, mean hitting time {mean:.1f}, required window {list(WINDOW)}")


@pytest.mark.parametrize("algorithm", ["one_mu_one_mu", "mu_plus_lambda"])
def test_c6_rederived_mean(algorithm):
    """The exact absorbing-chain mean, with a 4 standard-error band from the sample spread."""
    exact, success = exact_chain(algorithm)
    times = finite_times(escape_records(algorithm))
    mean = statistics.fmean(times)
    se = statistics.stdev(times) / math.sqrt(len(times))
    ok = len(times) == TRIALS and abs(mean - float(exact)) <= 4 * se
    if algorithm == "one_mu_one_mu":
        ok = ok and exact == 640 and set(success.values()) == {Fraction(1, 640)}
    verdict(f"C6 exact mean [{algorithm}]", ok,
            f"exact E[T] = {exact} = {float(exact):.2f}, empirical {mean:.1f} +- {4 * se:.1f}")


def test_c7_operator_probability(g):
    V1, V2, V3, V4 = paper_covers()
    f = estimate_prepad_hit(g, V4, V1, 200_000, random.Random(7))
    producing = [
        r for size in range(5) for r in combinations(V4.vertices(), size)
        if remove_and_repair(g, V4, VertexSet.from_vertices(8, r)) == V1
    ]
    ok = abs(f - 0.0625) <= 0.004 and producing == [(5, 6)]
    verdict("C7 removal+repair hit", ok, f"frequency {f:.5f} vs 0.0625 +- 0.004; producing subsets {producing}")


@pytest.mark.parametrize("algorithm", ["one_mu_one_mu", "mu_plus_lambda"])
def test_c8_geometric_dominance(algorithm):
    rep = dominance_report(list(escape_records(algorithm)), 1 / 640, n=8)
    refs = {r["name"]: r["p"] for r in rep.references}
    noted = any("o(sqrt(n))" in n for n in rep.notes)
    ok = rep.holds is True and refs.get("theorem1") == 1 / 256 and noted
    verdict(f"C8 dominance [{algorithm}]", ok,
            f"every decile within 99% slack: {rep.holds}, max excess {rep.max_excess:.4f}, 1/256 reference shown")


PROPERTIES = [
    "test_count_form_equals_pairwise",
    "test_replace_delta_matches_recompute",
    "test_jump_and_repair_keeps_cover_and_pads_to_k",
    "test_steps_keep_size_feasibility_and_diversity",
    "test_elitism_from_oversized_covers",
    "test_runs_reproducible",
]


@pytest.mark.parametrize("name", PROPERTIES)
def test_c9_fuzzed_properties(name):
    fn = getattr(test_properties, name)
    assert fn.hypothesis.inner_test  # a hypothesis-wrapped property
    try:
        fn()
        ok, detail = True, "1000 fuzz cases, zero failures"
    except Exception as exc:  # report, then fail below
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    verdict(f"C9 {name[5:]}", ok, detail)
