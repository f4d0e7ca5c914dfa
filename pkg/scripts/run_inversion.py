#!/usr/bin/env python3
"""Threaded-engine ratio sweeps with injected per-algorithm delays.

Reproduces the real-time pecking-order inversion: with deliberation cost
proportional to algorithmic complexity, ZIP overtakes AA and the belief/DP
trader GDX falls behind even ZIC.  Sessions run in real time (wall_duration
seconds each), one at a time, so a full pair at n=30 takes ~30 minutes.
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cdasim.harness import SweepConfig, run_sweep, write_sweep_csv

PAIRS = [("AA", "ZIC"), ("AA", "ZIP"), ("GDX", "ZIC"), ("GDX", "ZIP")]
DELAYS = {"ZIC": 0.1, "ZIP": 0.2, "AA": 1.0, "GDX": 10.0}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=30, help="sessions per ratio")
    parser.add_argument("--seed", type=int, default=777)
    parser.add_argument("--wall", type=float, default=3.0, help="wall seconds per session")
    parser.add_argument("--time-scale", type=float, default=100.0)
    parser.add_argument("--parallelism", choices=["serialized", "full"], default="full")
    parser.add_argument("--out", default="results/threaded")
    args = parser.parse_args()

    for algo_a, algo_b in PAIRS:
        t0 = time.perf_counter()
        cfg = SweepConfig(
            algo_a=algo_a, algo_b=algo_b, n_per_ratio=args.n,
            master_seed=args.seed, mode="threaded", jobs=1,
            threaded=dict(wall_duration=args.wall, time_scale=args.time_scale,
                          parallelism=args.parallelism, delay_profile=dict(DELAYS)),
        )
        sweep = run_sweep(cfg)
        detail, summary = write_sweep_csv(sweep, args.out)
        print(f"{algo_a} vs {algo_b}: {sweep.total_wins_a}-{sweep.total_wins_b} "
              f"(ties {sweep.total_ties}) in {(time.perf_counter() - t0) / 60:.1f} min")
        print(f"  {detail}\n  {summary}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
