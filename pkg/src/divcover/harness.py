"""Batch experiments, Monte Carlo estimators and geometric-dominance statistics."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy import stats

from divcover.algorithms import CSV_FIELDS, RunConfig, TrialRecord, run
from divcover.covers import VertexSet, is_cover, is_non_excessive
from divcover.diversity import Population, diversity_from_counts
from divcover.graph import Graph, paper_instance
from divcover.landscape import (
    exact_success_probability,
    extended_population,
    lemma3_population,
    lemma4_population,
    optimal_diversity,
)
from divcover.mutation import _prepad, mutate_bits

__all__ = [
    "ExperimentSpec",
    "TrialError",
    "DominanceReport",
    "START_PRESETS",
    "CSV_VERSION_LINE",
    "resolve_start",
    "run_experiment",
    "estimate_success",
    "estimate_prepad_hit",
    "dominance_report",
    "reference_p0",
    "write_records_csv",
    "read_records_csv",
]

START_PRESETS = ("auto", "lemma3_pair", "lemma4", "extended")
CSV_VERSION_LINE = "# divcover trial records v1"


class TrialError(RuntimeError):
    """A single trial of an experiment failed; ``cause`` holds the original error."""

    def __init__(self, trial: int, cause: BaseException):
        super().__init__(f"trial {trial} failed: {cause}")
        self.trial = trial
        self.cause = cause


def resolve_start(start: str | Population, cfg: RunConfig) -> Population | None:
    """Map a preset name to a start population; ``None`` means build one per run."""
    if isinstance(start, Population):
        return start
    if start == "auto":
        return None
    if start == "lemma3_pair":
        if cfg.graph != paper_instance():
            raise ValueError("lemma3_pair needs the 8-vertex base instance")
        return lemma3_population()
    if start == "lemma4":
        if cfg.graph != paper_instance():
            raise ValueError("lemma4 needs the 8-vertex base instance")
        return lemma4_population(cfg.mu)
    if start == "extended":
        m, odd = divmod(cfg.graph.n - 8, 2)
        if m < 1 or odd:
            raise ValueError("extended preset needs an extended instance on 8 + 2m vertices")
        return extended_population(cfg.mu, m)
    raise ValueError(f"unknown start preset {start!r}; choose from {START_PRESETS}")


@dataclass
class ExperimentSpec:
    config: RunConfig
    trial_count: int
    seed_base: int = 0
    start: str | Population = "auto"

    def __post_init__(self):
        if self.trial_count < 1:
            raise ValueError("trial_count must be >= 1")


def _one_trial(args) -> TrialRecord:
    t, cfg, initial = args
    try:
        return run(cfg, initial)[0]
    except Exception as exc:
        raise TrialError(t, exc) from exc


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> list[TrialRecord]:
    """Run ``trial_count`` independent trials; trial ``t`` uses seed ``seed_base + t``.

    Results are returned in trial order whatever the worker count.
    """
    initial = resolve_start(spec.start, spec.config)
    jobs = [
        (t, replace(spec.config, seed=spec.seed_base + t), initial)
        for t in range(spec.trial_count)
    ]
    if workers <= 1:
        return [_one_trial(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_one_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def estimate_success(
    g: Graph,
    k: int,
    mu: int,
    start: Population,
    samples: int,
    rng,
    target: int | None = None,
) -> float:
    """Fraction of offspring batches (``mu`` offspring, uniform parents) that are all
    feasible and reach ``target`` diversity (default: the exhaustive optimum)."""
    if len(start) != mu:
        raise ValueError(f"start has {len(start)} members, expected {mu}")
    if target is None:
        target = optimal_diversity(g, k, mu).value
    nbrs, n = g.neighbor_masks, g.n
    parents = [x.bits for x in start]
    hits = 0
    for _ in range(samples):
        kids = [mutate_bits(nbrs, n, k, parents[rng.randrange(mu)], rng) for _ in range(mu)]
        if any(b.bit_count() > k for b in kids):
            continue
        counts = [0] * n
        for b in kids:
            while b:
                low = b & -b
                counts[low.bit_length() - 1] += 1
                b ^= low
        if diversity_from_counts(counts, mu) >= target:
            hits += 1
    return hits / samples


def estimate_prepad_hit(g: Graph, x: VertexSet, y: VertexSet, samples: int, rng) -> float:
    """Frequency with which removal+repair of ``x`` yields exactly ``y`` before padding."""
    if not is_cover(g, x):
        raise ValueError(f"{x} is not a cover")
    if not is_non_excessive(g, y):
        raise ValueError(f"{y} is not a non-excessive cover")
    nbrs, xb, yb = g.neighbor_masks, x.bits, y.bits
    hits = sum(1 for _ in range(samples) if _prepad(nbrs, xb, rng) == yb)
    return hits / samples


def reference_p0(name: str, k: int, mu: int, n: int | None = None) -> float:
    """Reference per-iteration success probabilities.

    ``theorem1``: ``2^(-k mu)``. ``exact-paper-instance``: the exact batch success
    probability from (V1, V2) on the 8-vertex instance, computed from the exact
    operator law (only for ``mu = 2, k = 4``). ``bernoulli``: ``2^(-k mu)`` times
    ``1 - (k mu)^2 / n``, defined only when ``(k mu)^2 < n``.
    """
    if name == "theorem1":
        return 2.0 ** (-k * mu)
    if name == "exact-paper-instance":
        if (k, mu) != (4, 2):
            raise ValueError("exact-paper-instance is defined for k = 4, mu = 2 only")
        return float(_paper_exact_p0())
    if name == "bernoulli":
        if n is None or (k * mu) ** 2 >= n:
            raise ValueError("bernoulli reference needs (k mu)^2 < n")
        return 2.0 ** (-k * mu) * (1 - (k * mu) ** 2 / n)
    raise ValueError(f"unknown p0 preset {name!r}")


def _paper_exact_p0() -> Fraction:
    g = paper_instance()
    return exact_success_probability(g, 4, lemma3_population(), 8)


@dataclass
class DominanceReport:
    p0: float
    trials: int
    finite: int
    empirical_mean: float | None
    geometric_mean: float
    confidence: float
    rows: list[dict] = field(default_factory=list)
    max_excess: float | None = None
    holds: bool | None = None  # None: inconclusive
    references: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def inconclusive(self) -> bool:
        return self.holds is None

    def to_json(self) -> dict:
        return {
            "p0": self.p0,
            "trials": self.trials,
            "finite": self.finite,
            "empirical_mean": self.empirical_mean,
            "geometric_mean": self.geometric_mean,
            "confidence": self.confidence,
            "rows": self.rows,
            "max_excess": self.max_excess,
            "holds": self.holds,
            "references": self.references,
            "notes": self.notes,
        }

    def format(self) -> str:
        lines = [
            f"p0 = {self.p0:.6g}  (geometric mean 1/p0 = {self.geometric_mean:.1f})",
            f"trials = {self.trials}, finite = {self.finite}, empirical mean = "
            + ("n/a" if self.empirical_mean is None else f"{self.empirical_mean:.1f}"),
        ]
        if self.rows:
            lines.append(f"{'q':>5} {'t_emp':>8} {'t_geom':>8} {'S_emp':>8} {'S_geom':>8} {'slack':>8}  ok")
            for r in self.rows:
                lines.append(
                    f"{r['quantile']:>5.2f} {r['t']:>8} {r['t_geom']:>8} {r['survival_empirical']:>8.4f} "
                    f"{r['survival_geometric']:>8.4f} {r['slack']:>8.4f}  {'yes' if r['ok'] else 'NO'}"
                )
        for ref in self.references:
            lines.append(f"reference {ref['name']}: p = {ref['p']:.6g}, mean = {1 / ref['p']:.1f}")
        lines.extend(f"note: {n}" for n in self.notes)
        verdict = "INCONCLUSIVE" if self.holds is None else ("HOLDS" if self.holds else "VIOLATED")
        lines.append(f"dominance by Geom(p0): {verdict}")
        return "\n".join(lines)


def dominance_report(
    records: list[TrialRecord],
    p0: float,
    *,
    quantiles=tuple(np.arange(1, 10) / 10),
    confidence: float = 0.99,
    n: int | None = None,
) -> DominanceReport:
    """One-sided check that hitting times are stochastically no larger than Geom(p0).

    At each empirical quantile ``t`` the empirical survival ``P(T > t)`` must not
    exceed ``(1 - p0)^t`` by more than the ``confidence`` binomial upper slack
    for the number of trials. ``n`` (instance order) enables the extra
    reference lines derived from ``k`` and ``mu`` of the records.
    """
    if not records:
        raise ValueError("no records")
    if not 0 < p0 < 1:
        raise ValueError("p0 must lie in (0, 1)")
    configs = {(r.algorithm, r.mu, r.lam, r.k) for r in records}
    if len(configs) > 1:
        raise ValueError(f"records mix configurations: {sorted(configs)}")
    _, mu, _, k = configs.pop()
    times = np.array([math.inf if r.hitting_time is None else r.hitting_time for r in records])
    finite = times[np.isfinite(times)]
    report = DominanceReport(
        p0=p0,
        trials=len(times),
        finite=len(finite),
        empirical_mean=float(finite.mean()) if len(finite) else None,
        geometric_mean=1 / p0,
        confidence=confidence,
    )
    report.references.append({"name": "theorem1", "p": 2.0 ** (-k * mu)})
    if n is not None:
        if (k * mu) ** 2 < n:
            report.references.append({"name": "bernoulli", "p": reference_p0("bernoulli", k, mu, n)})
        else:
            report.notes.append(
                f"(k*mu)^2 = {(k * mu) ** 2} >= n = {n}: the instance is outside the k*mu = o(sqrt(n)) "
                "regime, so 2^(-k*mu) is not a valid finite-size lower bound here"
            )
    if len(finite) == 0:
        report.notes.append("no trial reached the target; dominance cannot be assessed")
        return report
    if len(finite) < len(times):
        report.notes.append(
            f"{len(times) - len(finite)} trials censored at their budget; mean is over finite trials"
        )
    log_q = math.log1p(-p0)
    N = len(times)
    excess = []
    for q in quantiles:
        t = float(np.quantile(times, q, method="inverted_cdf"))
        t_geom = math.ceil(math.log1p(-q) / log_q)
        if math.isinf(t):
            s_emp, s_geom, slack, ok = 1.0, 0.0, 0.0, False
        else:
            s_emp = float(np.mean(times > t))
            s_geom = math.exp(t * log_q)
            slack = float(stats.binom.ppf(confidence, N, s_geom)) / N - s_geom
            ok = s_emp <= s_geom + slack + 1e-12
        excess.append(s_emp - s_geom - slack)
        report.rows.append(
            {
                "quantile": float(q),
                "t": None if math.isinf(t) else int(t),
                "t_geom": t_geom,
                "survival_empirical": s_emp,
                "survival_geometric": s_geom,
                "slack": slack,
                "ok": ok,
            }
        )
    report.max_excess = max(excess)
    report.holds = all(r["ok"] for r in report.rows)
    return report


def write_records_csv(records: list[TrialRecord], fh) -> None:
    fh.write(CSV_VERSION_LINE + "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow(r.csv_row())


def read_records_csv(fh) -> list[TrialRecord]:
    lines = [ln for ln in fh if not ln.startswith("#")]
    return [TrialRecord.from_csv_row(row) for row in csv.DictReader(io.StringIO("".join(lines)))]
