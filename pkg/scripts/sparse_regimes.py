"""Concentration of U and W in the sparse regimes p_n -> 0.

Runs each configured regime and prints the predicted candidate sets next
to the observed mass and, where a limit exists, the mass on the lowest
candidate.

    python3 scripts/sparse_regimes.py --trials 2000
"""

import argparse
import math
import time
from dataclasses import dataclass

from longest_ap import theory
from longest_ap.montecarlo import TrialPlan, concentration_mass, fmt, run_trials


@dataclass(frozen=True)
class Regime:
    label: str
    n: int
    b: float
    u: float | None = None

    @property
    def p_n(self) -> float:
        if math.isinf(self.b):
            return 1 / math.log(self.n)
        if self.u is not None:
            return (self.u / self.n**2) ** (1 / self.b)
        return self.n ** (-2 / self.b)


REGIMES = (
    Regime("b=inf, p=1/ln n", 10**5, math.inf),
    Regime("b=3.5", 10**6, 3.5),
    Regime("b=2.5", 10**5, 2.5),
    Regime("b=3, u=4", 250000, 3.0, 4.0),
    Regime("b=4, u=1", 10**5, 4.0, 1.0),
)


def run(regime: Regime, trials: int, seed: int):
    pred = theory.sparse_regime_predict(regime.n, regime.p_n, regime.b, regime.u)
    start = time.perf_counter()
    dists = run_trials(TrialPlan(regime.n, regime.p_n, trials, seed, "both", "sparse"))
    secs = time.perf_counter() - start
    for stat, cands, limit in (
        ("U", pred.candidate_set_u, pred.limit_prob_u_low),
        ("W", pred.candidate_set_w, pred.limit_prob_w_low),
    ):
        d = dists[stat]
        low = min(cands)
        yield [
            regime.label,
            regime.n,
            fmt(regime.p_n),
            stat,
            ";".join(map(str, sorted(cands))),
            fmt(concentration_mass(d, cands)),
            fmt(d.counts.get(low, 0) / d.trials),
            "" if limit is None else fmt(limit),
            f"{secs:.1f}",
        ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    print("regime,n,p_n,statistic,candidate_set,mass,low_mass,limit_low_mass,seconds")
    for regime in REGIMES:
        for row in run(regime, args.trials, args.seed):
            print(",".join(map(str, row)), flush=True)


if __name__ == "__main__":
    main()
