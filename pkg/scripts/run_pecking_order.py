#!/usr/bin/env python3
"""Sequential-engine ratio sweeps for the four classic A-vs-B contests.

Writes one detail CSV and one summary CSV per pair into --out.  At the
published scale (n=500 per ratio) this is hours of CPU; n=100 reproduces
the same dominance directions in minutes.
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cdasim.harness import SweepConfig, run_sweep, write_sweep_csv

PAIRS = [("AA", "ZIC"), ("AA", "ZIP"), ("GDX", "ZIC"), ("GDX", "ZIP")]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100, help="sessions per ratio")
    parser.add_argument("--seed", type=int, default=1234)
    parser.add_argument("--jobs", type=int, default=os.cpu_count())
    parser.add_argument("--out", default="results/sequential")
    args = parser.parse_args()

    for algo_a, algo_b in PAIRS:
        t0 = time.perf_counter()
        cfg = SweepConfig(algo_a=algo_a, algo_b=algo_b, n_per_ratio=args.n,
                          master_seed=args.seed, jobs=args.jobs)
        sweep = run_sweep(cfg)
        detail, summary = write_sweep_csv(sweep, args.out)
        print(f"{algo_a} vs {algo_b}: {sweep.total_wins_a}-{sweep.total_wins_b} "
              f"(ties {sweep.total_ties}) in {(time.perf_counter() - t0) / 60:.1f} min")
        print(f"  {detail}\n  {summary}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
