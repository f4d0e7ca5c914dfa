"""Command-line entry point.

Subcommands:

* ``run``     -- one market session; prints per-algorithm APPT and the tape path.
* ``sweep``   -- full 19-ratio A-vs-B sweep; writes detail + summary CSVs.
* ``summary`` -- re-aggregate an existing detail CSV into a summary CSV.

Exit status 0 on success, nonzero with a diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import config as cfgmod
from .book import write_tape_csv
from .harness import (
    SweepConfig,
    build_roster,
    run_sweep,
    summarize_detail_rows,
    read_detail_csv,
    summary_filename,
    write_summary_csv,
    write_sweep_csv,
)
from .session import SessionConfig, appt
from .sequential import run_session_sequential
from .threaded import ThreadedConfig, run_session_threaded
from .traders import ALGOS


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=["seq", "threaded"], default=None,
                   help="engine (default: config file's choice, else seq)")
    p.add_argument("--algos", default="ZIC,ZIC", metavar="A,B",
                   help="comma-separated pair of algorithms")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--config", metavar="FILE", help="experiment config file")
    p.add_argument("--out", default="out", metavar="DIR")
    p.add_argument("--duration", type=float, help="virtual seconds (sequential)")
    p.add_argument("--per-side", type=int, default=20)
    # threaded knobs
    p.add_argument("--wall-duration", type=float)
    p.add_argument("--time-scale", type=float)
    p.add_argument("--parallelism", choices=["serialized", "full"])
    p.add_argument("--queue-capacity", type=int)
    p.add_argument("--delay", action="append", default=[], metavar="ALGO=MS",
                   help="per-algorithm injected delay, repeatable")


def _parse_algos(text: str) -> tuple[str, str]:
    parts = [p.strip().upper() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise SystemExit(f"--algos needs exactly two names, got {text!r}")
    for name in parts:
        if name not in ALGOS:
            raise SystemExit(f"unknown algorithm {name!r}; choose from {sorted(ALGOS)}")
    return parts[0], parts[1]


def _parse_delays(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise SystemExit(f"--delay wants ALGO=MS, got {item!r}")
        name, ms = item.split("=", 1)
        out[name.strip().upper()] = float(ms)
    return out


def _gather(args):
    """Merge defaults <- config file <- CLI flags."""
    file_cfg = cfgmod.load_config(args.config) if args.config else {}
    schedule = cfgmod.schedule_from_config(file_cfg)
    trader_params = cfgmod.trader_params_from_config(file_cfg)
    engine = cfgmod.engine_from_config(file_cfg)
    sweep = cfgmod.sweep_from_config(file_cfg)

    chosen = args.mode or engine.get("mode", "seq")
    mode = "threaded" if chosen.startswith("thread") else "sequential"
    duration = args.duration or engine.get("duration", 300.0)

    threaded_kwargs = {}
    for key in ("wall_duration", "time_scale", "parallelism", "queue_capacity",
                "delay_method", "drain_timeout"):
        if engine.get(key) is not None:
            threaded_kwargs[key] = engine[key]
    for key in ("wall_duration", "time_scale", "parallelism", "queue_capacity"):
        value = getattr(args, key)
        if value is not None:
            threaded_kwargs[key] = value
    delays = dict(engine.get("delay_profile", {}))
    delays.update(_parse_delays(args.delay))
    if delays:
        threaded_kwargs["delay_profile"] = delays

    return {
        "mode": mode,
        "duration": duration,
        "schedule": schedule,
        "trader_params": trader_params,
        "threaded": threaded_kwargs,
        "sweep": sweep,
    }


def cmd_run(args) -> int:
    algo_a, algo_b = _parse_algos(args.algos)
    g = _gather(args)
    per_side = args.per_side
    schedule = g["schedule"]
    if schedule.n_per_side != per_side:
        import dataclasses
        schedule = dataclasses.replace(schedule, n_per_side=per_side)
    roster = build_roster(algo_a, algo_b, max(1, per_side // 2), per_side)
    common = dict(duration=g["duration"], roster=roster, schedule=schedule,
                  trader_params=g["trader_params"], seed=args.seed)
    if g["mode"] == "sequential":
        result = run_session_sequential(SessionConfig(**common))
    else:
        result = run_session_threaded(ThreadedConfig(**common, **g["threaded"]))

    os.makedirs(args.out, exist_ok=True)
    tape_path = os.path.join(args.out, f"session_{args.seed}_tape.csv")
    write_tape_csv(result.tape, tape_path)
    print(f"engine: {result.engine_mode}  trades: {len(result.tape)}  "
          f"virtual duration: {result.realized_duration:.1f}s")
    for algo in sorted({algo_a, algo_b}):
        print(f"APPT {algo}: {appt(result, algo):.3f}")
    print(f"tape: {tape_path}")
    return 0


def cmd_sweep(args) -> int:
    algo_a, algo_b = _parse_algos(args.algos)
    g = _gather(args)
    sweep_over = g["sweep"]
    cfg = SweepConfig(
        algo_a=sweep_over.get("algoA", algo_a),
        algo_b=sweep_over.get("algoB", algo_b),
        n_per_ratio=args.n if args.n is not None else sweep_over.get("n_per_ratio", 500),
        per_side=sweep_over.get("per_side", args.per_side),
        mode=g["mode"],
        master_seed=args.seed if args.seed is not None else sweep_over.get("master_seed", 1),
        duration=g["duration"],
        schedule=g["schedule"],
        trader_params=g["trader_params"],
        threaded=g["threaded"],
        jobs=args.jobs if args.jobs is not None else sweep_over.get("jobs"),
    )

    def progress(done, total):
        if done % 50 == 0 or done == total:
            print(f"\r{done}/{total} sessions", end="", file=sys.stderr, flush=True)

    sweep = run_sweep(cfg, progress=progress if not args.quiet else None)
    if not args.quiet:
        print(file=sys.stderr)
    detail_path, summary_path = write_sweep_csv(sweep, args.out)
    print(f"total wins {cfg.algo_a}: {sweep.total_wins_a}  "
          f"{cfg.algo_b}: {sweep.total_wins_b}  ties: {sweep.total_ties}  "
          f"excluded: {sweep.total_excluded}")
    print(f"detail:  {detail_path}")
    print(f"summary: {summary_path}")
    return 0


def cmd_summary(args) -> int:
    rows, mode, algo_a, algo_b = read_detail_csv(args.detail)
    if not rows:
        print("detail file has no rows", file=sys.stderr)
        return 1
    ratio_results = summarize_detail_rows(rows)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, summary_filename(algo_a, algo_b, mode))
    write_summary_csv(ratio_results, path)
    total_a = sum(r.wins_a for r in ratio_results)
    total_b = sum(r.wins_b for r in ratio_results)
    ties = sum(r.ties for r in ratio_results)
    print(f"{algo_a} vs {algo_b} ({mode}): {total_a} / {total_b} wins, {ties} ties")
    print(f"summary: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdasim")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one market session")
    _add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a 19-ratio A-vs-B sweep")
    _add_common(p_sweep)
    p_sweep.add_argument("--n", type=int, help="sessions per ratio")
    p_sweep.add_argument("--jobs", type=int, help="parallel session workers")
    p_sweep.add_argument("--quiet", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sum = sub.add_parser("summary", help="re-aggregate a detail CSV")
    p_sum.add_argument("--detail", required=True, metavar="CSV")
    p_sum.add_argument("--out", default="out", metavar="DIR")
    p_sum.set_defaults(func=cmd_summary)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        if isinstance(code, str):
            print(code, file=sys.stderr)
            return 2
        return code if code is not None else 0
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
