"""Command-line front end: sample, estimate, construct, verify, partition, search.

Exit codes
    0  success / property holds / witness found
    1  unexpected internal error
    2  invalid arguments or rejected parameters
    3  counterexample or failed check (verify fails, estimate outside its
       sigma threshold, search found nothing within bounds)
    4  inconclusive: a search budget ran out
    5  construct: no attempt met the thresholds
    6  infeasible size for an exact computation
    7  unreadable, unwritable or malformed file
"""

from __future__ import annotations

import argparse
import math
import sys
import time
import warnings
from pathlib import Path

from . import io
from .cliques import BudgetExceeded, CliqueLimitExceeded
from .construction import Thresholds, construct_witness, theoretical_thresholds
from .graphs import LayeredDigraph, as_digraph
from .random_model import (
    ParamSet,
    count_overlap_pairs,
    delta,
    expected_clique_count,
    janson_upper_bound,
    mc_clique_count,
    mc_no_clique_probability,
    mu,
    overlap_pair_coefficient,
    sample_gnp,
)
from .search import search_small
from .verifier import FAILS, INCONCLUSIVE, gallai_milgram_partition, verify_adversarial, verify_exhaustive

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_FAILS, EXIT_INCONCLUSIVE, EXIT_THRESHOLD, EXIT_INFEASIBLE, EXIT_IO = range(8)

FORMULA_SIGMA = 4.0
BOUND_SIGMA = 3.0
# Largest number of ordered subset pairs the delta-pairs brute force will enumerate.
PAIR_ENUM_LIMIT = 10**7


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0; no implicit entropy)")
    p.add_argument("--out", type=Path, help="output file")
    p.add_argument("--json", action="store_true", help="print the JSON result on stdout")
    p.add_argument("--quiet", action="store_true", help="suppress the summary line")
    p.add_argument("--canonical", action="store_true", help="omit timing fields from JSON output")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hjwitness", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", parents=[common], help="sample G(n, p) to a graph file")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float, required=True)

    e = sub.add_parser("estimate", parents=[common], help="Monte Carlo and closed-form checks")
    e.add_argument("kind", choices=["clique-count", "no-clique-prob", "delta-pairs"])
    e.add_argument("--n", type=int)
    e.add_argument("--u", type=int)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--r", type=int, help="clique size for clique-count (default k)")
    e.add_argument("--p", type=float)
    e.add_argument("--trials", type=int, default=1000)
    e.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("construct", parents=[common], help="build a layered witness candidate")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--p", type=float)
    mode.add_argument("--paper-mode", action="store_true", help="p = min(1, 20 n^(-2/k)); n must be a multiple of 2k")
    c.add_argument("--max-cliques", type=int, help="default 2*20^C(k+1,2)")
    c.add_argument("--min-coverage", type=float, help="default 0.5")
    c.add_argument("--attempts", type=int, default=10)

    v = sub.add_parser("verify", parents=[common], help="check the path-deletion property")
    v.add_argument("file", type=Path)
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--mode", choices=["exhaustive", "adversarial"], default="exhaustive")
    v.add_argument("--budget", type=int)
    v.add_argument("--disjoint", action="store_true", help="require the deleted paths to be vertex-disjoint")

    pa = sub.add_parser("partition", parents=[common], help="partition a digraph into at most alpha paths")
    pa.add_argument("file", type=Path)

    se = sub.add_parser("search", parents=[common], help="exhaustive search for small layered witnesses")
    se.add_argument("--k", type=int, required=True)
    se.add_argument("--max-n", type=int, required=True)
    se.add_argument("--budget", type=int, default=100_000)
    return parser


def _emit(args, data: dict, summary: str, write_file: bool = True) -> None:
    text = io.dumps(data, canonical=args.canonical)
    if args.out is not None and write_file:
        _write(args.out, text)
    if args.json or (args.out is None and write_file):
        sys.stdout.write(text)
    if not args.quiet:
        print(summary, file=sys.stderr if (args.json or args.out is None) else sys.stdout)


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _config(args) -> io.RunConfig:
    skip = {"command", "out", "json", "quiet", "canonical"}
    opts = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items()) if k not in skip}
    return io.RunConfig(args.command, opts)


def cmd_sample(args) -> int:
    try:
        params = ParamSet(args.n, 1, args.p, args.seed)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    g = sample_gnp(params)
    text = io.format_graph(g)
    if args.out is not None:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        print(f"n={g.n} m={g.m} seed={args.seed}", file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def _need(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise CliError(f"{args.kind} needs {' '.join(missing)}", EXIT_USAGE)


def cmd_estimate(args) -> int:
    t0 = time.perf_counter()
    try:
        if args.kind == "clique-count":
            _need(args, "n", "p")
            r = args.r if args.r is not None else args.k
            params = ParamSet(args.n, args.k, args.p, args.seed)
            closed = expected_clique_count(args.n, r, args.p)
            est = mc_clique_count(params, r, args.trials, workers=args.workers)
            ok = abs(est.mean - closed) <= FORMULA_SIGMA * est.stderr
            if est.stderr == 0.0:
                ok = math.isclose(est.mean, closed, rel_tol=1e-12, abs_tol=1e-12)
            data = io.estimate_to_dict(est, {"estimator": "clique-count", "closed_form": closed,
                                             "sigma": FORMULA_SIGMA, "pass": ok})
            summary = f"clique-count: mean={est.mean:.6g} stderr={est.stderr:.3g} closed_form={closed:.6g} pass={ok}"
        elif args.kind == "no-clique-prob":
            _need(args, "u", "p")
            est = mc_no_clique_probability(args.u, args.k, args.p, args.trials, args.seed, workers=args.workers)
            m_ = mu(args.u, args.k, args.p)
            d_ = delta(args.u, args.k, args.p) if args.k >= 2 else 0.0
            bound = janson_upper_bound(m_, d_)
            ok = est.mean <= bound + BOUND_SIGMA * est.stderr
            data = io.estimate_to_dict(est, {"estimator": "no-clique-prob", "mu": m_, "delta": d_,
                                             "closed_form": bound, "sigma": BOUND_SIGMA, "pass": ok})
            summary = f"no-clique-prob: mean={est.mean:.6g} stderr={est.stderr:.3g} janson_bound={bound:.6g} pass={ok}"
        else:
            _need(args, "u")
            if not 2 <= args.k <= args.u:
                raise CliError("delta-pairs needs 2 <= k <= u", EXIT_USAGE)
            n_subsets = math.comb(args.u, args.k)
            if n_subsets * n_subsets > PAIR_ENUM_LIMIT:
                raise CliError(f"{n_subsets}^2 ordered pairs exceed the enumeration limit {PAIR_ENUM_LIMIT}",
                               EXIT_INFEASIBLE)
            rows = []
            for i in range(2, args.k):
                brute = count_overlap_pairs(args.u, args.k, i)
                closed_i = overlap_pair_coefficient(args.u, args.k, i)
                rows.append({"i": i, "enumerated": brute, "closed_form": closed_i, "match": brute == closed_i})
            ok = all(r["match"] for r in rows)
            data = {"schema": io.SCHEMA, "estimator": "delta-pairs", "u": args.u, "k": args.k,
                    "overlaps": rows, "pass": ok, "seed": args.seed}
            if args.p is not None:
                data["delta"] = delta(args.u, args.k, args.p)
                data["p"] = args.p
            summary = "delta-pairs: " + ", ".join(f"i={r['i']}: {r['enumerated']} == {r['closed_form']}"
                                                  for r in rows) + f" pass={ok}"
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    data["config"] = _config(args).to_dict()
    data["timing"] = {"total": time.perf_counter() - t0}
    _emit(args, data, summary)
    return EXIT_OK if data["pass"] else EXIT_FAILS


def cmd_construct(args) -> int:
    if args.k == 1:
        raise CliError("construct needs k >= 2: for k = 1 any tournament is a witness; "
                       "check one with `hjwitness verify FILE --k 1`", EXIT_USAGE)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if args.paper_mode:
                params = ParamSet.paper(args.n, args.k, args.seed)
            else:
                params = ParamSet(args.n, args.k, args.p, args.seed)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        base = theoretical_thresholds(args.k)
        th = Thresholds(args.max_cliques if args.max_cliques is not None else base.max_cliques,
                        args.min_coverage if args.min_coverage is not None else base.min_coverage)
        t0 = time.perf_counter()
        report = construct_witness(params, th, args.attempts)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    except (BudgetExceeded, CliqueLimitExceeded) as exc:
        raise CliError(str(exc), EXIT_INFEASIBLE) from None
    data = io.report_to_dict(report, _config(args))
    data["timing"]["total"] = time.perf_counter() - t0
    stats = report.candidate.stage_stats
    summary = (f"construct: success={report.success} attempt={report.candidate.attempt} p={params.p:.6g} "
               f"t={stats.get('t')} coverage={stats.get('coverage')}")
    _emit(args, data, summary)
    if report.success:
        return EXIT_OK
    if any(c.name == "clique_enumeration" for c in report.checks):
        return EXIT_INFEASIBLE
    return EXIT_THRESHOLD


def _load(path: Path):
    try:
        return io.load_digraph(path)
    except (io.FormatError, ValueError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO) from None


def cmd_verify(args) -> int:
    d = _load(args.file)
    if args.k < 1:
        raise CliError("k must be at least 1", EXIT_USAGE)
    t0 = time.perf_counter()
    if args.mode == "exhaustive":
        verdict = verify_exhaustive(d, args.k, budget=args.budget, disjoint=args.disjoint)
    else:
        verdict = verify_adversarial(d, args.k, args.budget if args.budget is not None else 1000,
                                     args.seed, disjoint=args.disjoint)
    data = io.verdict_to_dict(verdict)
    data["config"] = _config(args).to_dict()
    data["timing"] = {"total": time.perf_counter() - t0}
    _emit(args, data, f"verify: {verdict.outcome} (alpha={verdict.alpha}, work={verdict.work})")
    if verdict.outcome == FAILS:
        return EXIT_FAILS
    if verdict.outcome == INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_partition(args) -> int:
    d = _load(args.file)
    dg, labels = as_digraph(d)
    part = gallai_milgram_partition(dg)
    if isinstance(d, LayeredDigraph):
        part = type(part)(tuple(tuple(labels[v] for v in p) for p in part.paths),
                          tuple(labels[v] for v in part.stable_witness))
    data = io.partition_to_dict(part)
    data["config"] = _config(args).to_dict()
    _emit(args, data, f"partition: {len(part.paths)} paths")
    return EXIT_OK


def cmd_search(args) -> int:
    if args.k < 1 or args.max_n < 0 or args.budget < 0:
        raise CliError("need k >= 1, max-n >= 0, budget >= 0", EXIT_USAGE)
    res = search_small(args.k, args.max_n, args.budget)
    data = res.to_dict()
    data["config"] = _config(args).to_dict()
    n = res.witness.n if res.witness else None
    summary = {
        "found": f"search: witness on {n} vertices",
        "none-found": f"search: no witness with at most {args.max_n} vertices ({res.examined} candidates checked)",
        "budget-exhausted": f"search: budget exhausted after {res.examined} candidates",
    }[res.status]
    _emit(args, data, summary)
    return {"found": EXIT_OK, "none-found": EXIT_FAILS, "budget-exhausted": EXIT_INCONCLUSIVE}[res.status]


COMMANDS = {
    "sample": cmd_sample,
    "estimate": cmd_estimate,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "partition": cmd_partition,
    "search": cmd_search,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
