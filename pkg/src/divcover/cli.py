"""Command-line entry point: ``divcover <subcommand>`` or ``python -m divcover``.

Exit codes: 0 success, 1 verification failure, 2 infeasible instance,
3 oracle budget exceeded, 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys

from divcover.algorithms import InfeasibleInstanceError, RunConfig, run
from divcover.covers import OracleBudgetError, enumerate_covers, is_non_excessive
from divcover.graph import GraphParseError, paper_instance, read_graph
from divcover.harness import (
    START_PRESETS,
    ExperimentSpec,
    TrialError,
    dominance_report,
    estimate_success,
    read_records_csv,
    reference_p0,
    resolve_start,
    run_experiment,
    write_records_csv,
)
from divcover.landscape import (
    exact_success_probability,
    landscape_report,
    optimal_diversity,
    verify_lemmas,
)

EXIT_OK, EXIT_FAIL, EXIT_INFEASIBLE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3, 4
SEED_ENV = "DIVCOVER_SEED"


def load_config(path: str) -> tuple[RunConfig, dict]:
    with open(path) as fh:
        data = json.load(fh)
    if os.environ.get(SEED_ENV):
        data["seed"] = int(os.environ[SEED_ENV])
    return RunConfig.from_json(data, base_dir=os.path.dirname(os.path.abspath(path))), data


def _graph(path):
    return read_graph(path) if path else paper_instance()


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_enumerate(args) -> int:
    g = _graph(args.graph)
    for c in enumerate_covers(g, args.k):
        print(json.dumps({
            "vertices": c.vertices(),
            "bitstring": c.to_bitstring(),
            "size": c.size,
            "non_excessive": is_non_excessive(g, c),
        }))
    return EXIT_OK


def cmd_verify(args) -> int:
    claims = verify_lemmas()
    width = max(len(c.name) for c in claims)
    for c in claims:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.detail}")
    failed = sum(not c.passed for c in claims)
    print(f"{len(claims) - failed}/{len(claims)} claims pass")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_oracle(args) -> int:
    g = _graph(args.graph)
    check = None
    if args.check:
        cfg = RunConfig(g, args.k, args.mu)
        check = resolve_start(args.check, cfg)
    report = landscape_report(
        g, args.k, args.mu, instance_id=args.graph or "paper_instance", check=check,
        witness_cap=args.witness_cap,
    )
    _emit(report.to_json())
    return EXIT_OK


def cmd_run(args) -> int:
    cfg, data = load_config(args.config)
    start = args.start or data.get("start", "auto")
    record, pop = run(cfg, resolve_start(start, cfg))
    _emit({"record": record.to_json(), "population": pop.to_json()})
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg, data = load_config(args.config)
    start = args.start or data.get("start", "auto")
    spec = ExperimentSpec(cfg, args.trials, seed_base=cfg.seed, start=start)
    records = run_experiment(spec, workers=args.workers)
    if args.out == "-":
        write_records_csv(records, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_records_csv(records, fh)
    if args.p0:
        report = dominance_report(records, _p0(args.p0, cfg.k, cfg.mu, cfg.graph.n), n=cfg.graph.n)
        print(report.format(), file=sys.stderr)
    return EXIT_OK


def cmd_estimate(args) -> int:
    cfg, data = load_config(args.config)
    start_name = args.start or data.get("start", "lemma3_pair")
    start = resolve_start(start_name, cfg)
    if start is None:
        raise ValueError("estimate needs an explicit start population preset")
    target = cfg.target_diversity
    if target is None:
        target = optimal_diversity(cfg.graph, cfg.k, cfg.mu).value
    rng = random.Random(cfg.seed)
    freq = estimate_success(cfg.graph, cfg.k, cfg.mu, start, args.samples, rng, target=target)
    out = {"frequency": freq, "samples": args.samples, "target": target, "start": start_name}
    if args.exact:
        p = exact_success_probability(cfg.graph, cfg.k, start, target)
        out["exact"] = {"fraction": str(p), "value": float(p)}
    _emit(out)
    return EXIT_OK


def cmd_dominance(args) -> int:
    with open(args.records) as fh:
        records = read_records_csv(fh)
    k, mu = records[0].k, records[0].mu
    report = dominance_report(records, _p0(args.p0, k, mu, args.n), n=args.n)
    print(json.dumps(report.to_json(), indent=2) if args.json else report.format())
    if report.inconclusive:
        return EXIT_OK
    return EXIT_OK if report.holds else EXIT_FAIL


def _p0(spec: str, k: int, mu: int, n: int | None) -> float:
    try:
        return float(spec)
    except ValueError:
        return reference_p0(spec, k, mu, n)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="divcover", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list all covers of size <= k as JSON lines")
    p.add_argument("--graph", help="edge-list file (default: the 8-vertex instance)")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-lemmas", help="exhaustive PASS/FAIL table of the instance claims")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="optimal diversity by exhaustive search (JSON report)")
    p.add_argument("--graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--check", choices=[s for s in START_PRESETS if s != "auto"],
                   help="also test this preset population for strict local optimality")
    p.add_argument("--witness-cap", type=int, default=100)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("run", help="one seeded run; prints the trial record and final population")
    p.add_argument("--config", required=True)
    p.add_argument("--start", choices=START_PRESETS)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("experiment", help="many seeded runs to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-")
    p.add_argument("--start", choices=START_PRESETS)
    p.add_argument("--p0", help="also print a dominance report against Geom(p0): "
                   "a number, 'theorem1' or 'exact-paper-instance'")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("estimate", help="Monte Carlo per-iteration success frequency")
    p.add_argument("--config", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--start", choices=START_PRESETS)
    p.add_argument("--exact", action="store_true", help="also report the exact probability")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("dominance", help="geometric-dominance report for a trial CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--p0", required=True)
    p.add_argument("--n", type=int, help="instance order, for the finite-n reference line")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dominance)
    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, TrialError):
        return _exit_code(exc.cause)
    if isinstance(exc, InfeasibleInstanceError):
        return EXIT_INFEASIBLE
    if isinstance(exc, OracleBudgetError):
        return EXIT_BUDGET
    if isinstance(exc, (GraphParseError, ValueError, KeyError, OSError, json.JSONDecodeError)):
        return EXIT_INPUT
    raise exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Exception as exc:
        code = _exit_code(exc)
        print(f"divcover: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
