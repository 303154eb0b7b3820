"""Command-line front end: ``longest-ap <subcommand> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage error, 3 a resource
guard refused the job.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from longest_ap import events, montecarlo, theory
from longest_ap.errors import ResourceGuardError
from longest_ap.montecarlo import EmpiricalDistribution, TrialPlan, fmt, round12
from longest_ap.scanner import longest_ap, longest_cyclic_ap
from longest_ap.sequence import SeedSpec, from_text, generate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

DECOMPOSITION_SAMPLES = 200
DECOMPOSITION_MAX_N = 32
A2_MAX_N = 18


class UsageError(ValueError):
    pass


# -- helpers ---------------------------------------------------------------


def _stat_list(stat: str) -> list[str]:
    return ["U", "W"] if stat == "both" else [stat.upper()]


def _threads(value: str) -> Optional[int]:
    if value == "auto":
        return None
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("threads must be a positive integer or 'auto'")
    if k < 1:
        raise argparse.ArgumentTypeError("threads must be a positive integer or 'auto'")
    return k


def _p_list(value: str) -> list[float]:
    try:
        return [float(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probability list {value!r}")


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return fmt(x)
    if isinstance(x, (set, frozenset, list, tuple)):
        return ";".join(str(v) for v in sorted(x))
    return str(x)


def _json_value(x):
    if isinstance(x, float):
        return round12(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


def _csv_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def _dump_json(obj) -> str:
    return json.dumps(_json_value(obj), indent=2) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- subcommands -----------------------------------------------------------


def cmd_scan(args) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    seq = from_text(text)
    results = []
    for st in _stat_list(args.stat):
        strategy = args.strategy
        if strategy == "dense":
            strategy = "pruned" if st == "U" else "cyclic"
        fn = longest_ap if st == "U" else longest_cyclic_ap
        results.append(fn(seq, strategy).as_dict())
    if args.format == "json":
        _emit(_dump_json(results[0] if len(results) == 1 else results), args.output)
    else:
        rows = [[r["statistic"], r["value"], r["a"], r["s"]] for r in results]
        _emit(_csv_table(["statistic", "value", "a", "s"], rows), args.output)
    return EXIT_OK


THEORY_HEADER = ["statistic", "r", "intensity", "cdf_approx", "chen_stein_budget", "lower", "upper", "a2_bound"]


def cmd_theory(args) -> int:
    if args.r_min < 2 or args.r_max < args.r_min:
        raise UsageError("need 2 <= r-min <= r-max")
    rows = []
    for st in _stat_list(args.stat):
        for r in range(args.r_min, args.r_max + 1):
            bounds = theory.intensity_bounds(st, args.n, r, args.p) if r <= args.n else None
            rows.append(
                [
                    st,
                    r,
                    theory.poisson_mean(st, args.n, r, args.p),
                    theory.cdf_approx(st, args.n, r, args.p),
                    theory.chen_stein_budget(st, args.n, r, args.p),
                    bounds.lower if bounds else None,
                    bounds.upper if bounds else None,
                    bounds.a2_bound if bounds else None,
                ]
            )
    if args.format == "json":
        _emit(_dump_json({"n": args.n, "p": args.p, "rows": [dict(zip(THEORY_HEADER, r)) for r in rows]}), args.output)
    else:
        _emit(_csv_table(THEORY_HEADER, rows), args.output)
    return EXIT_OK


def _plan(args, statistic: str) -> TrialPlan:
    return TrialPlan(args.n, args.p, args.trials, args.seed, statistic, args.strategy)


def _distributions_text(dists: list[EmpiricalDistribution], fmt_: str) -> str:
    if fmt_ == "json":
        payload = [json.loads(d.to_json()) for d in dists]
        return _dump_json(payload[0] if len(payload) == 1 else payload)
    if len(dists) == 1:
        return dists[0].to_csv()
    rows = [[d.statistic, v, c] for d in dists for v, c in d.counts.items()]
    return _csv_table(["statistic", "value", "count"], rows)


def cmd_simulate(args) -> int:
    stat = "both" if args.stat == "both" else args.stat.upper()
    dists = montecarlo.run_trials(_plan(args, stat), threads=args.threads)
    _emit(_distributions_text(list(dists.values()), args.format), args.output)
    return EXIT_OK


def read_distribution(path: str, statistic: str, n: int, p: float) -> EmpiricalDistribution:
    """Load a ``simulate`` CSV; a leading ``statistic`` column is filtered on."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    if rows and rows[0] == ["statistic", "value", "count"]:
        kept = [r[1:] for r in rows[1:] if r and r[0] == statistic]
        text = _csv_table(["value", "count"], kept)
    return EmpiricalDistribution.from_csv(text, statistic, n, p)


def cmd_compare(args) -> int:
    st = args.stat.upper()
    if args.from_dist:
        dist = read_distribution(args.from_dist, st, args.n, args.p)
    else:
        if args.trials is None:
            raise UsageError("compare needs --trials or --from-dist")
        dist = montecarlo.run_trials(_plan(args, st), threads=args.threads)[st]
    report = montecarlo.compare_to_theory(dist)
    _emit(report.to_json() if args.format == "json" else report.to_csv(), args.output)
    return EXIT_OK


FAILURE_HEADER = ["check", "statistic", "n", "r", "p", "lhs", "rhs"]


def verify_bounds(n_max: int, r_max: int, p_list: Sequence[float], seed: int = 0) -> tuple[dict, list]:
    """Run the small-instance oracle checks; returns (counts per check, failures)."""
    checks = {"sandwich": 0, "a2_bound": 0, "budget": 0, "decomposition": 0}
    failures = []
    for p in p_list:
        for n in range(2, n_max + 1):
            for r in range(2, min(n, r_max) + 1):
                for st in ("U", "W"):
                    exact = events.exact_intensity(st, n, r, p)
                    b = theory.intensity_bounds(st, n, r, p)
                    checks["sandwich"] += 1
                    if not b.lower <= exact <= b.upper:
                        failures.append(["sandwich", st, n, r, p, exact, f"[{fmt(b.lower)}, {fmt(b.upper)}]"])
                    checks["budget"] += 1
                    dep = events.dependency_graph_sum(st, n, r, p)
                    budget = theory.chen_stein_budget(st, n, r, p)
                    if dep > budget:
                        failures.append(["budget", st, n, r, p, dep, budget])
                if n <= A2_MAX_N:
                    prob = events.full_cycle_union_probability(n, r, p)
                    bound = n * p**r / ((1 - p) * r)
                    checks["a2_bound"] += 1
                    if prob > bound:
                        failures.append(["a2_bound", "W", n, r, p, prob, bound])
    rng = np.random.default_rng(seed)
    top = min(n_max, DECOMPOSITION_MAX_N)
    if top >= 2:
        for t in range(DECOMPOSITION_SAMPLES):
            n = int(rng.integers(2, top + 1))
            r = int(rng.integers(2, min(n, r_max) + 1))
            p = float(p_list[t % len(p_list)])
            seq = generate(n, p, SeedSpec(seed, t))
            lhs, rhs = events.w_decomposition_holds(seq, r)
            checks["decomposition"] += 1
            if lhs != rhs:
                failures.append(["decomposition", "W", n, r, p, lhs, rhs])
    return checks, failures


def cmd_verify_bounds(args) -> int:
    if args.n_max < 2 or args.r_max < 2:
        raise UsageError("need n-max >= 2 and r-max >= 2")
    if not args.p_list or any(not 0 < p < 1 for p in args.p_list):
        raise UsageError("probabilities must lie in (0, 1)")
    checks, failures = verify_bounds(args.n_max, args.r_max, args.p_list, args.seed)
    if args.format == "json":
        _emit(_dump_json({"checks": checks, "failures": [dict(zip(FAILURE_HEADER, f)) for f in failures]}), args.output)
    else:
        _emit(_csv_table(FAILURE_HEADER, failures), args.output)
    total = sum(checks.values())
    print(f"verify-bounds: {total - len(failures)}/{total} checks hold", file=sys.stderr)
    return EXIT_OK if not failures else EXIT_FAIL


REGIME_HEADER = ["statistic", "candidate_set", "mass", "low_value", "empirical_low_mass", "limit_low_mass"]


def regime_probability(n: int, b: float, u: Optional[float], pn_rule: Optional[str]) -> float:
    """p_n for a regime run: ``(u / n^2)^(1/b)``, ``n^(-2/b)`` without ``u``, or ``1/ln n``."""
    if pn_rule == "inverse-log":
        return 1.0 / math.log(n)
    if u is not None:
        return (u / n**2) ** (1.0 / b)
    return n ** (-2.0 / b)


def cmd_sparse_regime(args) -> int:
    if args.b_infinite == (args.b is not None):
        raise UsageError("give exactly one of --b and --b-infinite")
    if args.b_infinite and args.pn_rule is None:
        raise UsageError("--b-infinite needs --pn-rule")
    b = math.inf if args.b_infinite else args.b
    p_n = regime_probability(args.n, b, args.u, args.pn_rule)
    pred = theory.sparse_regime_predict(args.n, p_n, b, args.u)
    plan = TrialPlan(args.n, p_n, args.trials, args.seed, "both", args.strategy)
    dists = montecarlo.run_trials(plan, threads=args.threads)
    rows = []
    for st, cands, limit in (
        ("U", pred.candidate_set_u, pred.limit_prob_u_low),
        ("W", pred.candidate_set_w, pred.limit_prob_w_low),
    ):
        d = dists[st]
        low = min(cands)
        rows.append([st, cands, montecarlo.concentration_mass(d, cands), low, d.counts.get(low, 0) / d.trials, limit])
    if args.format == "json":
        payload = {
            "n": args.n,
            "p_n": p_n,
            "trials": args.trials,
            "seed": args.seed,
            "prediction": pred.as_dict(),
            "rows": [dict(zip(REGIME_HEADER, r)) for r in rows],
            "counts": {st: {str(v): c for v, c in d.counts.items()} for st, d in dists.items()},
        }
        _emit(_dump_json(payload), args.output)
    else:
        _emit(_csv_table(REGIME_HEADER, rows), args.output)
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def _common(sub: argparse.ArgumentParser, default_format: str) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default=default_format)
    sub.add_argument("--output", default=None, help="file path; standard output by default")


def _mc_flags(sub: argparse.ArgumentParser, default_strategy: str = "auto") -> None:
    sub.add_argument("--trials", type=int, default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--threads", type=_threads, default=None, help="positive integer or 'auto'")
    sub.add_argument("--strategy", choices=("auto", "naive", "dense", "sparse"), default=default_strategy)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="longest-ap", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("scan", help="U and W of a 0/1 sequence")
    s.add_argument("--input", required=True, help="file holding the sequence, or - for standard input")
    s.add_argument("--stat", choices=("u", "w", "both"), default="both")
    s.add_argument("--strategy", choices=("auto", "naive", "dense", "pruned", "cyclic", "sparse"), default="auto")
    _common(s, "json")
    s.set_defaults(func=cmd_scan)

    s = subs.add_parser("theory", help="closed-form approximations per threshold")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--r-min", type=int, required=True)
    s.add_argument("--r-max", type=int, required=True)
    s.add_argument("--stat", choices=("u", "w", "both"), default="both")
    _common(s, "csv")
    s.set_defaults(func=cmd_theory)

    s = subs.add_parser("simulate", help="Monte Carlo distribution of U and/or W")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--stat", choices=("u", "w", "both"), default="both")
    _mc_flags(s)
    _common(s, "csv")
    s.set_defaults(func=cmd_simulate)

    s = subs.add_parser("compare", help="empirical CDF against the Poisson approximation")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--stat", choices=("u", "w"), default="u")
    s.add_argument("--from-dist", default=None, help="reuse a simulate CSV instead of simulating")
    _mc_flags(s)
    _common(s, "csv")
    s.set_defaults(func=cmd_compare)

    s = subs.add_parser("verify-bounds", help="exact small-instance checks of the bounds")
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--r-max", type=int, required=True)
    s.add_argument("--p-list", type=_p_list, required=True)
    s.add_argument("--seed", type=int, default=0)
    _common(s, "csv")
    s.set_defaults(func=cmd_verify_bounds)

    s = subs.add_parser("sparse-regime", help="concentration of U and W for vanishing p")
    s.add_argument("--b", type=float, default=None)
    s.add_argument("--b-infinite", action="store_true")
    s.add_argument("--u", type=float, default=None)
    s.add_argument("--pn-rule", choices=("inverse-log",), default=None)
    s.add_argument("--n", type=int, required=True)
    _mc_flags(s, default_strategy="sparse")
    _common(s, "json")
    s.set_defaults(func=cmd_sparse_regime)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 0) is None and args.command in ("simulate", "sparse-regime"):
        parser.error("--trials is required")
    try:
        return args.func(args)
    except ResourceGuardError as exc:
        print(f"longest-ap: resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, OSError) as exc:
        print(f"longest-ap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
