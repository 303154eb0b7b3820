"""Reproducible Monte Carlo estimates of the laws of U and W.

Trial ``t`` always uses ``SeedSpec(master_seed, t)``, so counts depend on the
plan only, never on how trials are split over threads.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Literal, NamedTuple, Optional

import numpy as np

from longest_ap import theory
from longest_ap.errors import ResourceGuardError
from longest_ap.scanner import scan_value
from longest_ap.sequence import SeedSpec, generate

MAX_WORK = 10**11  # cap on n * trials
WINDOW_EPS = 1e-4
DEFAULT_DELTA = 1e-3

_U_STRATEGY = {"auto": "auto", "naive": "naive", "sparse": "sparse", "dense": "pruned", "pruned": "pruned", "cyclic": "pruned"}
_W_STRATEGY = {"auto": "auto", "naive": "naive", "sparse": "sparse", "dense": "cyclic", "pruned": "cyclic", "cyclic": "cyclic"}


def fmt(x: float) -> str:
    """Locale-independent float text with 12 significant digits."""
    return format(x, ".12g")


def round12(x: float) -> Optional[float]:
    """Float rounded to 12 significant digits; None when not finite (JSON has no inf)."""
    if not math.isfinite(x):
        return None
    return float(fmt(x))


@dataclass(frozen=True)
class TrialPlan:
    n: int
    p: float
    trials: int
    master_seed: int = 0
    statistic: Literal["U", "W", "both"] = "both"
    strategy: str = "auto"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie strictly between 0 and 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.statistic not in ("U", "W", "both"):
            raise ValueError(f"unknown statistic {self.statistic!r}")
        if self.strategy not in _U_STRATEGY:
            raise ValueError(f"unknown strategy {self.strategy!r}")

    @property
    def statistics(self) -> tuple[str, ...]:
        return ("U", "W") if self.statistic == "both" else (self.statistic,)


@dataclass
class EmpiricalDistribution:
    statistic: str
    n: int
    p: float
    trials: int
    counts: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.counts = {int(k): int(v) for k, v in sorted(self.counts.items()) if v}
        if sum(self.counts.values()) != self.trials:
            raise ValueError("counts do not sum to trials")
        if any(k < 0 or k > self.n for k in self.counts):
            raise ValueError("observed values must lie in [0, n]")

    def cdf(self, r: int) -> float:
        """Empirical ``P(value < r)``."""
        return sum(c for v, c in self.counts.items() if v < r) / self.trials

    def merge(self, other: "EmpiricalDistribution") -> "EmpiricalDistribution":
        if (self.statistic, self.n, self.p) != (other.statistic, other.n, other.p):
            raise ValueError("cannot merge distributions of different plans")
        merged = Counter(self.counts)
        merged.update(other.counts)
        return EmpiricalDistribution(self.statistic, self.n, self.p, self.trials + other.trials, dict(merged))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "count"])
        for v, c in self.counts.items():
            w.writerow([v, c])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, statistic: str, n: int, p: float) -> "EmpiricalDistribution":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["value", "count"]:
            raise ValueError("expected a 'value,count' header")
        counts = {int(v): int(c) for v, c in rows[1:] if v}
        return cls(statistic, n, p, sum(counts.values()), counts)

    def to_json(self) -> str:
        payload = {
            "statistic": self.statistic,
            "n": self.n,
            "p": round12(self.p),
            "trials": self.trials,
            "counts": {str(v): c for v, c in self.counts.items()},
        }
        return json.dumps(payload, indent=2) + "\n"


def trial_values(plan: TrialPlan, start: int, stop: int) -> dict[str, np.ndarray]:
    """Per-trial statistic values for trial indices ``start..stop-1``."""
    out = {st: np.empty(stop - start, dtype=np.int64) for st in plan.statistics}
    for k, t in enumerate(range(start, stop)):
        seq = generate(plan.n, plan.p, SeedSpec(plan.master_seed, t))
        for st in plan.statistics:
            strat = _U_STRATEGY[plan.strategy] if st == "U" else _W_STRATEGY[plan.strategy]
            out[st][k] = scan_value(seq, st, strat)
    return out


def _tally(plan: TrialPlan, start: int, stop: int) -> dict[str, Counter]:
    vals = trial_values(plan, start, stop)
    return {st: Counter(v.tolist()) for st, v in vals.items()}


def chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    """Contiguous trial-index ranges, one per worker."""
    workers = max(1, min(workers, trials))
    bounds = [trials * k // workers for k in range(workers + 1)]
    return [(bounds[k], bounds[k + 1]) for k in range(workers)]


def run_trials(plan: TrialPlan, threads: Optional[int] = None) -> dict[str, EmpiricalDistribution]:
    """One empirical distribution per requested statistic."""
    if plan.n * plan.trials > MAX_WORK:
        raise ResourceGuardError(f"n * trials = {plan.n * plan.trials} exceeds {MAX_WORK}")
    threads = threads or os.cpu_count() or 1
    parts = chunks(plan.trials, threads)
    if len(parts) == 1:
        tallies = [_tally(plan, *parts[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(parts)) as pool:
            tallies = list(pool.map(lambda se: _tally(plan, *se), parts))
    out = {}
    for st in plan.statistics:
        total = Counter()
        for t in tallies:
            total.update(t[st])
        out[st] = EmpiricalDistribution(st, plan.n, plan.p, plan.trials, dict(total))
    return out


def dkw_band(trials: int, delta: float = DEFAULT_DELTA) -> float:
    """Dvoretzky-Kiefer-Wolfowitz bound sqrt(ln(2/delta) / (2N))."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return math.sqrt(math.log(2.0 / delta) / (2.0 * trials))


class ComparisonRow(NamedTuple):
    r: int
    empirical_cdf: float
    theory_cdf: float
    abs_diff: float
    dkw_band: float
    chen_stein_budget: float


CSV_HEADER = ["r", "empirical_cdf", "theory_cdf", "abs_diff", "dkw_band", "chen_stein_budget"]


@dataclass(frozen=True)
class ComparisonReport:
    statistic: str
    n: int
    p: float
    trials: int
    rows: tuple[ComparisonRow, ...]

    @property
    def sup_abs_diff(self) -> float:
        return max(row.abs_diff for row in self.rows)

    @property
    def r_window(self) -> tuple[int, int]:
        return self.rows[0].r, self.rows[-1].r

    def to_csv(self) -> str:
        lines = [",".join(CSV_HEADER)]
        for row in self.rows:
            lines.append(",".join([str(row.r)] + [fmt(x) for x in row[1:]]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "statistic": self.statistic,
            "n": self.n,
            "p": round12(self.p),
            "trials": self.trials,
            "r_window": list(self.r_window),
            "sup_abs_diff": round12(self.sup_abs_diff),
            "rows": [dict(zip(CSV_HEADER, [row.r] + [round12(x) for x in row[1:]])) for row in self.rows],
        }
        return json.dumps(payload, indent=2) + "\n"


def theory_window(statistic: str, n: int, p: float, eps: float = WINDOW_EPS) -> list[int]:
    """Thresholds r with the Poisson approximation of P(stat < r) in [eps, 1 - eps]."""
    out = []
    for r in range(2, n + 1):
        f = theory.cdf_approx(statistic, n, r, p)
        if f > 1.0 - eps:
            break
        if f >= eps:
            out.append(r)
    return out


def compare_to_theory(dist: EmpiricalDistribution, delta: float = DEFAULT_DELTA) -> ComparisonReport:
    if dist.trials < 100:
        raise ValueError("need at least 100 trials for a comparison")
    window = theory_window(dist.statistic, dist.n, dist.p)
    if not window:
        raise ValueError(f"empty comparison window for n={dist.n}, p={dist.p}")
    band = dkw_band(dist.trials, delta)
    rows = []
    for r in window:
        emp = dist.cdf(r)
        th = theory.cdf_approx(dist.statistic, dist.n, r, dist.p)
        rows.append(
            ComparisonRow(r, emp, th, abs(emp - th), band, theory.chen_stein_budget(dist.statistic, dist.n, r, dist.p))
        )
    return ComparisonReport(dist.statistic, dist.n, dist.p, dist.trials, tuple(rows))


def concentration_mass(dist: EmpiricalDistribution, candidate_set: Iterable[int]) -> float:
    cands = set(candidate_set)
    if not cands:
        raise ValueError("candidate set must be nonempty")
    return sum(dist.counts.get(v, 0) for v in cands) / dist.trials
