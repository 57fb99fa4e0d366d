"""
Hitting times against a geometric bound
=======================================

Compare the empirical survival function of escape times with Geom(1/640),
decile by decile, allowing for binomial sampling slack.
"""

import random

from divcover import paper_instance
from divcover.algorithms import RunConfig
from divcover.harness import ExperimentSpec, dominance_report, estimate_success, reference_p0, run_experiment
from divcover.landscape import lemma3_population

g = paper_instance()

# Monte Carlo check of the per-iteration success probability
freq = estimate_success(g, 4, 2, lemma3_population(), 50_000, random.Random(1), target=8)
print(f"estimated p = {freq:.5f}, exact = {reference_p0('exact-paper-instance', 4, 2):.5f}")

cfg = RunConfig(g, k=4, mu=2, algorithm="one_mu_one_mu", budget=20_000, target_diversity=8)
recs = run_experiment(ExperimentSpec(cfg, 100, start="lemma3_pair"))

print()
print(dominance_report(recs, reference_p0("exact-paper-instance", 4, 2), n=g.n).format())
