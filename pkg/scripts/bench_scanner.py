"""Per-sequence cost of each scanning strategy across (n, p).

    python3 scripts/bench_scanner.py --reps 50
"""

import argparse
import time

from longest_ap.scanner import scan_value
from longest_ap.sequence import SeedSpec, generate

CASES = ((1024, 0.5), (4096, 0.5), (10**5, 0.0868), (250000, 4.0e-4), (10**6, 1e-4))
STRATEGIES = {"U": ("pruned", "sparse", "auto"), "W": ("cyclic", "sparse", "auto")}


def time_strategy(seqs, stat, strategy):
    scan_value(seqs[0], stat, strategy)  # compile outside the timed loop
    start = time.perf_counter()
    for seq in seqs:
        scan_value(seq, stat, strategy)
    return (time.perf_counter() - start) / len(seqs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--max-dense-n", type=int, default=10**5, help="skip dense strategies above this n")
    args = ap.parse_args(argv)
    print("n,p,statistic,strategy,ms_per_sequence")
    for n, p in CASES:
        seqs = [generate(n, p, SeedSpec(0, t)) for t in range(args.reps)]
        for stat, strategies in STRATEGIES.items():
            for strategy in strategies:
                if strategy in ("pruned", "cyclic") and n > args.max_dense_n:
                    continue
                ms = 1e3 * time_strategy(seqs, stat, strategy)
                print(f"{n},{p},{stat},{strategy},{ms:.3f}", flush=True)


if __name__ == "__main__":
    main()
