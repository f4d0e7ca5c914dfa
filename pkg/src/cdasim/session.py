"""Session configuration and results shared by both execution engines."""

from __future__ import annotations

import hashlib
import json
import statistics
from dataclasses import dataclass, field
from typing import Optional

from .book import Side
from .env import ScheduleConfig
from .traders import ALGOS
from .traders.aa import AaParams
from .traders.gdx import GdxParams
from .traders.zip import ZipParams


class ConfigInvalid(ValueError):
    pass


class TraderFault(RuntimeError):
    """A trader operation signalled an internal error; session aborted."""


def stable_hash(*parts) -> int:
    """Platform- and process-independent 63-bit hash of the parts."""
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class TraderParams:
    """All per-algorithm tuning constants, overridable from config files."""

    zip: ZipParams = field(default_factory=ZipParams)
    gdx: GdxParams = field(default_factory=GdxParams)
    aa: AaParams = field(default_factory=AaParams)

    def for_algo(self, algo: str):
        return {"ZIP": self.zip, "GDX": self.gdx, "AA": self.aa}.get(algo)


@dataclass(frozen=True)
class RosterEntry:
    trader_id: str
    algo: str
    side: Side


@dataclass(kw_only=True)
class SessionConfig:
    duration: float = 300.0  # virtual seconds
    roster: tuple = ()  # RosterEntry items
    schedule: ScheduleConfig = field(default_factory=ScheduleConfig)
    trader_params: TraderParams = field(default_factory=TraderParams)
    seed: int = 0
    record_tape: bool = True

    def validate(self) -> None:
        if self.duration <= 0:
            raise ConfigInvalid("duration must be positive")
        buyers = [r for r in self.roster if r.side is Side.BID]
        sellers = [r for r in self.roster if r.side is Side.ASK]
        if not buyers or len(buyers) != len(sellers):
            raise ConfigInvalid(
                f"roster needs equal, nonzero buyer/seller counts "
                f"(got {len(buyers)}/{len(sellers)})"
            )
        if len(buyers) != self.schedule.n_per_side:
            raise ConfigInvalid(
                f"roster has {len(buyers)} traders per side but the schedule "
                f"deals {self.schedule.n_per_side} limits per side"
            )
        ids = [r.trader_id for r in self.roster]
        if len(set(ids)) != len(ids):
            raise ConfigInvalid("duplicate trader ids in roster")
        for r in self.roster:
            if r.algo.upper() not in ALGOS:
                raise ConfigInvalid(f"unknown algorithm {r.algo!r}")


@dataclass(frozen=True)
class LatencyStats:
    """Wall-clock stats for one op of one algorithm, in seconds."""

    n: int
    mean: float
    p99: float

    @classmethod
    def from_samples(cls, samples) -> "LatencyStats":
        if not samples:
            return cls(0, 0.0, 0.0)
        if len(samples) == 1:
            return cls(1, samples[0], samples[0])
        qs = statistics.quantiles(samples, n=100, method="inclusive")
        return cls(len(samples), statistics.fmean(samples), qs[98])


@dataclass
class TradeRecord:
    """A transaction plus the private limits it executed against."""

    txn: object
    buyer_limit: int
    seller_limit: int

    @property
    def joint_surplus(self) -> int:
        return self.buyer_limit - self.seller_limit


@dataclass
class SessionResult:
    engine_mode: str
    tape: list = field(default_factory=list)
    trade_records: list = field(default_factory=list)
    profit_by_trader: dict = field(default_factory=dict)
    fills_by_trader: dict = field(default_factory=dict)
    algo_by_trader: dict = field(default_factory=dict)
    quote_calls: int = 0
    respond_calls_by_trader: dict = field(default_factory=dict)
    market_changes: int = 0
    poll_counts: dict = field(default_factory=dict)  # sequential engine
    loop_counts: dict = field(default_factory=dict)  # threaded engine
    latency: dict = field(default_factory=dict)  # (algo, op) -> LatencyStats
    realized_duration: float = 0.0  # virtual seconds covered
    wall_elapsed: float = 0.0
    seed: int = 0
    provenance: dict = field(default_factory=dict)
    rejected_orders: int = 0
    order_log: Optional[list] = None  # (trader_id, trader_seq) in processing order

    def appt_by_algo(self) -> dict:
        totals: dict = {}
        counts: dict = {}
        for tid, algo in self.algo_by_trader.items():
            totals[algo] = totals.get(algo, 0) + self.profit_by_trader.get(tid, 0)
            counts[algo] = counts.get(algo, 0) + 1
        return {a: totals[a] / counts[a] for a in totals}

    def to_canonical_json(self) -> str:
        """Deterministic serialization of the market outcome.

        Wall-clock measurements (latency, elapsed time) are excluded by
        construction: they are properties of the host, not of the market.
        """
        doc = {
            "engine_mode": self.engine_mode,
            "seed": self.seed,
            "tape": [
                [t.time, t.price, t.buyer_id, t.seller_id, t.resting_side.value]
                for t in self.tape
            ],
            "profits": dict(sorted(self.profit_by_trader.items())),
            "appt_by_algo": dict(sorted(self.appt_by_algo().items())),
            "quote_calls": self.quote_calls,
            "market_changes": self.market_changes,
            "poll_counts": dict(sorted(self.poll_counts.items())),
            "realized_duration": self.realized_duration,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


class NoSuchAlgoInSession(KeyError):
    pass


def appt(result: SessionResult, algo: str) -> float:
    """Mean profit per trader over every trader running `algo`."""
    key = algo.upper()
    profits = [
        result.profit_by_trader[tid]
        for tid, a in result.algo_by_trader.items()
        if a == key
    ]
    if not profits:
        raise NoSuchAlgoInSession(algo)
    return sum(profits) / len(profits)
