"""Continuous double auction market simulator.

Two interchangeable execution engines -- a deterministic time-sliced
sequential engine and a concurrent threaded engine -- plus the classic
ZIC / SHVR / ZIP / GDX / AA trading algorithms and a ratio-sweep experiment
harness for A-vs-B algorithm contests.
"""

from .book import (
    SYS_MAX_PRICE,
    SYS_MIN_PRICE,
    LimitOrderBook,
    MarketEvent,
    MarketSnapshot,
    Order,
    PriceOutOfBand,
    Side,
    Transaction,
    UnknownTrader,
    write_tape_csv,
)
from .env import (
    Assignment,
    OffsetParams,
    RangeViolation,
    ScheduleConfig,
    build_limits,
    issue_assignments,
    offset_value,
    tick_round,
)
from .harness import (
    RatioResult,
    SweepConfig,
    SweepResult,
    Winner,
    build_roster,
    run_sweep,
    score_session,
    write_sweep_csv,
)
from .session import (
    ConfigInvalid,
    LatencyStats,
    RosterEntry,
    SessionConfig,
    SessionResult,
    TraderFault,
    TraderParams,
    appt,
    stable_hash,
)
from .sequential import run_session_sequential
from .threaded import FillFeed, JoinTimeout, ThreadedConfig, run_session_threaded
from .traders import ALGOS, make_trader

__version__ = "0.1.0"
