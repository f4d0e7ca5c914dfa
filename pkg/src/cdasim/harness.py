"""A-vs-B ratio sweeps: roster construction, win scoring, CSV persistence.

A sweep pits algorithm A against algorithm B at every population ratio
a:b with a+b = 20 per market side (a = 1..19), running n independent
sessions per ratio.  A session is a win for A when A's average profit per
trader (APPT) strictly exceeds B's; exact equality is a tie and counts for
neither.  Per-session seeds derive from (master seed, ratio, trial), so
sequential-mode sweeps are exactly reproducible.

Outputs are two CSV files: a per-session detail table and a per-ratio
summary table with a final TOTAL row.  Serialization is canonical, so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from .book import Side
from .env import ScheduleConfig
from .session import (
    RosterEntry,
    SessionConfig,
    SessionResult,
    TraderParams,
    appt,
    stable_hash,
)
from .sequential import run_session_sequential
from .threaded import ThreadedConfig, run_session_threaded

RATIO_AS = tuple(range(1, 20))  # a in a:b, b = per_side - a


class Winner(str, Enum):
    A = "A"
    B = "B"
    TIE = "TIE"


def score_session(result: SessionResult, algo_a: str, algo_b: str) -> Winner:
    """Strict APPT comparison; exact equality is a tie."""
    appt_a = appt(result, algo_a)
    appt_b = appt(result, algo_b)
    if appt_a > appt_b:
        return Winner.A
    if appt_b > appt_a:
        return Winner.B
    return Winner.TIE


def build_roster(algo_a: str, algo_b: str, a: int, per_side: int = 20) -> tuple:
    """a traders of A and (per_side - a) of B on each market side."""
    if not 1 <= a <= per_side - 1:
        raise ValueError(f"ratio count {a} out of range for {per_side} per side")
    entries = []
    for i in range(per_side):
        algo = algo_a if i < a else algo_b
        entries.append(RosterEntry(f"B{i:02d}", algo.upper(), Side.BID))
    for i in range(per_side):
        algo = algo_a if i < a else algo_b
        entries.append(RosterEntry(f"S{i:02d}", algo.upper(), Side.ASK))
    return tuple(entries)


@dataclass(kw_only=True)
class SweepConfig:
    algo_a: str
    algo_b: str
    n_per_ratio: int = 500
    per_side: int = 20
    mode: str = "sequential"  # "sequential" | "threaded"
    master_seed: int = 1
    duration: float = 300.0
    schedule: Optional[ScheduleConfig] = None
    trader_params: TraderParams = field(default_factory=TraderParams)
    threaded: dict = field(default_factory=dict)  # ThreadedConfig overrides
    jobs: Optional[int] = None  # default: cpu count (sequential), 1 (threaded)

    def __post_init__(self):
        self.algo_a = self.algo_a.upper()
        self.algo_b = self.algo_b.upper()
        if self.n_per_ratio < 1:
            raise ValueError("n_per_ratio must be at least 1")
        if self.mode not in ("sequential", "threaded"):
            raise ValueError("mode must be 'sequential' or 'threaded'")
        if self.schedule is None:
            self.schedule = ScheduleConfig(n_per_side=self.per_side)
        elif self.schedule.n_per_side != self.per_side:
            self.schedule = replace(self.schedule, n_per_side=self.per_side)

    def session_seed(self, a: int, trial: int) -> int:
        return stable_hash(self.master_seed, a, trial)

    def session_config(self, a: int, trial: int):
        roster = build_roster(self.algo_a, self.algo_b, a, self.per_side)
        common = dict(
            duration=self.duration,
            roster=roster,
            schedule=self.schedule,
            trader_params=self.trader_params,
            seed=self.session_seed(a, trial),
        )
        if self.mode == "sequential":
            return SessionConfig(**common)
        return ThreadedConfig(**common, **self.threaded)


@dataclass(frozen=True)
class SessionDetail:
    ratio_a: int
    ratio_b: int
    trial: int
    seed: int
    appt_a: float
    appt_b: float
    winner: Winner
    surplus_violations: int = 0


@dataclass
class RatioResult:
    ratio_a: int
    ratio_b: int
    wins_a: int = 0
    wins_b: int = 0
    ties: int = 0
    excluded: int = 0

    @property
    def delta(self) -> int:
        return self.wins_a - self.wins_b


@dataclass
class SweepResult:
    algo_a: str
    algo_b: str
    mode: str
    n_per_ratio: int
    ratio_results: list = field(default_factory=list)
    details: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    @property
    def total_wins_a(self) -> int:
        return sum(r.wins_a for r in self.ratio_results)

    @property
    def total_wins_b(self) -> int:
        return sum(r.wins_b for r in self.ratio_results)

    @property
    def total_ties(self) -> int:
        return sum(r.ties for r in self.ratio_results)

    @property
    def total_excluded(self) -> int:
        return sum(r.excluded for r in self.ratio_results)


def _count_surplus_violations(result: SessionResult) -> int:
    """Trades where the booked profits fail to split the joint surplus."""
    bad = 0
    for rec in result.trade_records:
        buyer_gain = abs(rec.buyer_limit - rec.txn.price)
        seller_gain = abs(rec.txn.price - rec.seller_limit)
        if buyer_gain + seller_gain != rec.joint_surplus:
            bad += 1
    return bad


def run_one_session(cfg: SweepConfig, a: int, trial: int) -> SessionDetail:
    session_cfg = cfg.session_config(a, trial)
    if cfg.mode == "sequential":
        result = run_session_sequential(session_cfg)
    else:
        result = run_session_threaded(session_cfg)
    return SessionDetail(
        ratio_a=a,
        ratio_b=cfg.per_side - a,
        trial=trial,
        seed=session_cfg.seed,
        appt_a=appt(result, cfg.algo_a),
        appt_b=appt(result, cfg.algo_b),
        winner=score_session(result, cfg.algo_a, cfg.algo_b),
        surplus_violations=_count_surplus_violations(result),
    )


def _task(args):
    cfg, a, trial = args
    try:
        return run_one_session(cfg, a, trial)
    except Exception as exc:  # failed sessions are excluded, not fatal
        return (a, trial, repr(exc))


def run_sweep(cfg: SweepConfig, progress=None) -> SweepResult:
    """Run all 19 ratios.  `progress`, if given, is called with (done, total)."""
    tasks = [(cfg, a, trial) for a in RATIO_AS for trial in range(cfg.n_per_ratio)]
    jobs = cfg.jobs
    if jobs is None:
        jobs = os.cpu_count() or 1 if cfg.mode == "sequential" else 1

    outcomes = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, out in enumerate(pool.map(_task, tasks, chunksize=8)):
                outcomes.append(out)
                if progress:
                    progress(i + 1, len(tasks))
    else:
        for i, task in enumerate(tasks):
            outcomes.append(_task(task))
            if progress:
                progress(i + 1, len(tasks))

    by_ratio = {a: RatioResult(a, cfg.per_side - a) for a in RATIO_AS}
    details = []
    failures = []
    for out in outcomes:
        if isinstance(out, SessionDetail):
            details.append(out)
            rr = by_ratio[out.ratio_a]
            if out.winner is Winner.A:
                rr.wins_a += 1
            elif out.winner is Winner.B:
                rr.wins_b += 1
            else:
                rr.ties += 1
        else:
            a, trial, err = out
            by_ratio[a].excluded += 1
            failures.append({"ratio_a": a, "trial": trial, "error": err})

    details.sort(key=lambda d: (d.ratio_a, d.trial))
    sweep = SweepResult(
        algo_a=cfg.algo_a,
        algo_b=cfg.algo_b,
        mode=cfg.mode,
        n_per_ratio=cfg.n_per_ratio,
        ratio_results=[by_ratio[a] for a in RATIO_AS],
        details=details,
    )
    sweep.provenance = {
        "master_seed": cfg.master_seed,
        "mode": cfg.mode,
        "per_side": cfg.per_side,
        "threaded": dict(cfg.threaded),
        "failures": failures,
    }
    return sweep


DETAIL_HEADER = [
    "mode", "algoA", "algoB", "ratio_a", "ratio_b",
    "trial", "seed", "appt_a", "appt_b", "winner",
]
SUMMARY_HEADER = ["ratio_a", "ratio_b", "wins_a", "wins_b", "ties", "delta"]


def detail_filename(algo_a: str, algo_b: str, mode: str) -> str:
    return f"{algo_a}_vs_{algo_b}_{mode}_detail.csv"


def summary_filename(algo_a: str, algo_b: str, mode: str) -> str:
    return f"{algo_a}_vs_{algo_b}_{mode}_summary.csv"


def write_sweep_csv(sweep: SweepResult, out_dir) -> tuple[str, str]:
    """Write the detail and summary CSVs; returns their paths."""
    os.makedirs(out_dir, exist_ok=True)
    detail_path = os.path.join(out_dir, detail_filename(sweep.algo_a, sweep.algo_b, sweep.mode))
    summary_path = os.path.join(out_dir, summary_filename(sweep.algo_a, sweep.algo_b, sweep.mode))

    with open(detail_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(DETAIL_HEADER)
        for d in sweep.details:
            w.writerow([
                sweep.mode, sweep.algo_a, sweep.algo_b, d.ratio_a, d.ratio_b,
                d.trial, d.seed, repr(d.appt_a), repr(d.appt_b), d.winner.value,
            ])

    write_summary_csv(sweep.ratio_results, summary_path)
    return detail_path, summary_path


def write_summary_csv(ratio_results, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_HEADER)
        for r in ratio_results:
            w.writerow([r.ratio_a, r.ratio_b, r.wins_a, r.wins_b, r.ties, r.delta])
        if ratio_results:
            w.writerow([
                "TOTAL", "",
                sum(r.wins_a for r in ratio_results),
                sum(r.wins_b for r in ratio_results),
                sum(r.ties for r in ratio_results),
                sum(r.delta for r in ratio_results),
            ])


def read_detail_csv(path) -> tuple[list[dict], str, str, str]:
    """Rows plus the (mode, algoA, algoB) named in the file."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        return [], "", "", ""
    first = rows[0]
    return rows, first["mode"], first["algoA"], first["algoB"]


def summarize_detail_rows(rows) -> list[RatioResult]:
    """Re-aggregate a detail table into per-ratio results."""
    by_ratio = {a: RatioResult(a, 0) for a in RATIO_AS}
    for row in rows:
        a = int(row["ratio_a"])
        if a not in by_ratio:
            by_ratio[a] = RatioResult(a, int(row["ratio_b"]))
        rr = by_ratio[a]
        rr.ratio_b = int(row["ratio_b"])
        winner = row["winner"]
        if winner == "A":
            rr.wins_a += 1
        elif winner == "B":
            rr.wins_b += 1
        else:
            rr.ties += 1
    present = [by_ratio[a] for a in sorted(by_ratio) if
               by_ratio[a].wins_a + by_ratio[a].wins_b + by_ratio[a].ties > 0]
    return present


def read_summary_csv(path) -> list[RatioResult]:
    """Parse a summary CSV back into RatioResults (TOTAL row dropped)."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["ratio_a"] == "TOTAL":
                continue
            out.append(RatioResult(
                ratio_a=int(row["ratio_a"]),
                ratio_b=int(row["ratio_b"]),
                wins_a=int(row["wins_a"]),
                wins_b=int(row["wins_b"]),
                ties=int(row["ties"]),
            ))
    return out
