"""Evolutionary diversity optimization for k-vertex cover.

Total-Hamming-distance diversity, jump-and-repair mutation, the (mu+1),
(mu+lambda) and (1_mu+1_mu) diversity EAs, and exhaustive landscape oracles for
small instances with locally optimal populations.
"""

from divcover.algorithms import (
    InfeasibleInstanceError,
    RunConfig,
    TrialRecord,
    capped_fitness,
    run,
    step_mu_plus_lambda,
    step_mu_plus_one,
    step_one_mu_one_mu,
)
from divcover.covers import (
    OracleBudgetError,
    VertexSet,
    enumerate_covers,
    initial_cover,
    is_cover,
    is_non_excessive,
)
from divcover.diversity import Population, hamming, replace_delta, total_hamming
from divcover.graph import Graph, GraphParseError, extended_instance, paper_instance, parse_graph
from divcover.harness import (
    DominanceReport,
    ExperimentSpec,
    dominance_report,
    estimate_success,
    run_experiment,
)
from divcover.landscape import (
    extended_population,
    is_strict_local_optimum,
    lemma3_population,
    lemma4_population,
    optimal_diversity,
    paper_covers,
)
from divcover.mutation import jump_and_repair

__version__ = "0.1.0"
