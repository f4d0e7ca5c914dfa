"""Supply/demand schedule generation and periodic assignment issuance.

Buyer and seller limit prices are dealt from the same evenly-spaced value
set (symmetric curves), so the theoretical equilibrium price is the midpoint
of the configured range plus a time-varying offset.  The offset is a
drifting sinusoid, rounded to integer ticks.

Everything here is a pure function of its arguments plus an explicit random
source, so issuance is reproducible from a seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .book import SYS_MAX_PRICE, SYS_MIN_PRICE, Side


class RangeViolation(ValueError):
    """Offset pushed a limit price outside the system price band."""


def tick_round(x: float) -> int:
    """Round to the nearest integer tick, halves up."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class OffsetParams:
    amplitude: float = 40.0  # ticks
    wavelength: float = 300.0  # seconds, > 0
    drift: float = 0.0  # ticks per second

    def __post_init__(self):
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")


def offset_value(t: float, p: OffsetParams) -> int:
    """Equilibrium offset at time t: round(A*sin(2*pi*t/W) + G*t)."""
    return tick_round(p.amplitude * math.sin(2.0 * math.pi * t / p.wavelength) + p.drift * t)


@dataclass(frozen=True)
class ScheduleConfig:
    price_floor: int = 50
    price_ceil: int = 150
    n_per_side: int = 20
    offset: OffsetParams = field(default_factory=OffsetParams)
    replenish_interval: float = 30.0  # seconds

    def __post_init__(self):
        if self.price_floor >= self.price_ceil:
            raise ValueError("price_floor must be below price_ceil")
        if self.n_per_side < 1:
            raise ValueError("n_per_side must be at least 1")
        if self.replenish_interval <= 0:
            raise ValueError("replenish_interval must be positive")


@dataclass(frozen=True)
class Assignment:
    """A client order: trade one unit on `side`, never worse than `limit`."""

    trader_id: str
    side: Side  # Side.BID = buy, Side.ASK = sell
    limit: int
    issue_time: float


def build_limits(cfg: ScheduleConfig, t: float) -> tuple[list[int], list[int]]:
    """Evenly spaced limit prices for both sides at time t.

    Returns (demand_limits, supply_limits); the two lists are equal because
    the curves are symmetric.  Duplicate values after rounding are allowed.
    """
    off = offset_value(t, cfg.offset)
    lo = cfg.price_floor + off
    hi = cfg.price_ceil + off
    if lo < SYS_MIN_PRICE or hi > SYS_MAX_PRICE:
        raise RangeViolation(
            f"offset {off} pushes limit range [{lo}, {hi}] outside "
            f"[{SYS_MIN_PRICE}, {SYS_MAX_PRICE}]"
        )
    n = cfg.n_per_side
    if n == 1:
        values = [tick_round(lo)]
    else:
        step = (hi - lo) / (n - 1)
        values = [tick_round(lo + i * step) for i in range(n)]
    return list(values), list(values)


def issue_assignments(
    t: float,
    traders: Sequence[tuple[str, Side]],
    cfg: ScheduleConfig,
    rng,
) -> list[Assignment]:
    """Deal one fresh assignment to every trader, all stamped issue_time=t.

    Limits are dealt in a random permutation drawn from `rng`; any pending
    unfilled assignment held by a trader is superseded by the new one.
    """
    buyers = sorted(tid for tid, side in traders if side is Side.BID)
    sellers = sorted(tid for tid, side in traders if side is Side.ASK)
    if len(buyers) != cfg.n_per_side or len(sellers) != cfg.n_per_side:
        raise ValueError(
            f"roster has {len(buyers)} buyers / {len(sellers)} sellers, "
            f"schedule expects {cfg.n_per_side} per side"
        )
    demand, supply = build_limits(cfg, t)
    rng.shuffle(demand)
    rng.shuffle(supply)
    out = [
        Assignment(tid, Side.BID, limit, t) for tid, limit in zip(buyers, demand)
    ]
    out += [
        Assignment(tid, Side.ASK, limit, t) for tid, limit in zip(sellers, supply)
    ]
    return out
