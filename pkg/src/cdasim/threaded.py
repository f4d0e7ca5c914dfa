"""Concurrent engine: one thread per trader, one exchange thread.

Each trader runs a four-phase loop until the session deadline: (1) drain its
inbound feed (fills, fresh assignments, published market events), (2) run
its respond hook on the newest market event -- a trader that loops slowly
observes correspondingly fewer market events, (3) compute a quote,
(4) enqueue any emitted order on the exchange's bounded FIFO order queue.  The exchange
thread consumes that queue one order at a time, matches against the book,
pushes fills to both counterparties' feeds, and publishes a fresh snapshot
plus the triggering event to every feed after each accepted order.  A
coordinator thread deals assignment rounds on a wall-clock schedule.

Per-algorithm deliberation cost is injected as a configurable delay around
the respond and quote calls.  Under ``parallelism="serialized"`` the delay
busy-waits, so delayed traders compete for the interpreter lock exactly like
natively slow code and at most one trader computes at any instant; under
``parallelism="full"`` the delay sleeps, modelling each trader owning its
own processor, so delays overlap.  Either way a slower trader completes
fewer loop iterations and hence gets fewer chances to trade.

Shutdown: at the deadline a stop signal is raised; traders finish their
current cycle and exit, the exchange drains the remaining queued orders, and
any undelivered fills are applied before results are assembled.  Fills are
always booked against the assignment the filled order was quoted under, so a
fill that lands after its assignment was superseded (possible here, since
client-order replacement is not instantaneous across threads) still pays out
at the limit that was in force when the quote was made.

Threaded sessions are not replay-deterministic; results carry the seed,
delay profile, parallelism mode, and a host descriptor for provenance.
"""

from __future__ import annotations

import platform
import queue
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from random import Random
from time import perf_counter

from .book import LimitOrderBook, MarketEvent, OutcomeKind, Side
from .env import issue_assignments
from .session import (
    ConfigInvalid,
    LatencyStats,
    SessionConfig,
    SessionResult,
    TradeRecord,
    TraderFault,
    stable_hash,
)
from .sequential import build_traders


class JoinTimeout(RuntimeError):
    """An activity failed to stop in the drain window; session invalid."""


@dataclass(kw_only=True)
class ThreadedConfig(SessionConfig):
    wall_duration: float = 1.0  # wall seconds per session
    time_scale: float = 30.0  # virtual seconds per wall second
    delay_profile: dict = field(default_factory=dict)  # algo -> milliseconds
    parallelism: str = "serialized"  # "serialized" | "full"
    queue_capacity: int = 64
    delay_method: str = ""  # "" = from parallelism; "busy" | "sleep"
    record_order_log: bool = False
    drain_timeout: float = 10.0

    def validate(self) -> None:
        super().validate()
        if self.wall_duration <= 0:
            raise ConfigInvalid("wall_duration must be positive")
        if self.time_scale <= 0:
            raise ConfigInvalid("time_scale must be positive")
        if self.queue_capacity < 1:
            raise ConfigInvalid("queue_capacity must be at least 1")
        if self.parallelism not in ("serialized", "full"):
            raise ConfigInvalid("parallelism must be 'serialized' or 'full'")
        if self.delay_method not in ("", "busy", "sleep"):
            raise ConfigInvalid("delay_method must be '', 'busy' or 'sleep'")
        for algo, ms in self.delay_profile.items():
            if ms < 0:
                raise ConfigInvalid(f"negative delay for {algo}")


class FillFeed:
    """Unbounded FIFO from the exchange/coordinator to one trader.

    Appends are atomic under the interpreter lock, so the two producers
    (exchange, coordinator) and single consumer need no explicit locking.
    """

    __slots__ = ("_q",)

    def __init__(self):
        self._q = deque()

    def put(self, msg) -> None:
        self._q.append(msg)

    def drain(self) -> list:
        out = []
        q = self._q
        while True:
            try:
                out.append(q.popleft())
            except IndexError:
                return out


def _make_delay(ms: float, method: str):
    if ms <= 0:
        return None
    secs = ms / 1000.0
    if method == "busy":
        def delay():
            end = perf_counter() + secs
            while perf_counter() < end:
                pass
    else:
        def delay():
            time.sleep(secs)
    return delay


class _SessionState:
    """Shared wiring for one threaded session."""

    def __init__(self, cfg: ThreadedConfig):
        self.cfg = cfg
        self.order_queue: queue.Queue = queue.Queue(maxsize=cfg.queue_capacity)
        self.feeds = {r.trader_id: FillFeed() for r in cfg.roster}
        self.stop = threading.Event()
        self.producers_done = threading.Event()
        self.drained = threading.Event()
        self.start_wall = perf_counter()
        self.errors: list = []

    def now_virtual(self) -> float:
        return (perf_counter() - self.start_wall) * self.cfg.time_scale


def _exchange_loop(state: _SessionState, book: LimitOrderBook, stats: dict):
    cfg = state.cfg
    oq = state.order_queue
    feeds = state.feeds
    last_change_vt = float("-inf")

    def process(order):
        nonlocal last_change_vt
        vt = state.now_virtual()
        try:
            outcome = book.submit(order, vt)
        except Exception as exc:  # out-of-band or unknown trader
            stats["rejected"] += 1
            feeds[order.trader_id].put(("reject", order, repr(exc)))
            return
        if cfg.record_order_log:
            stats["order_log"].append((order.trader_id, order.trader_seq))
        if outcome.kind is OutcomeKind.TRADED:
            txn = outcome.txn
            resting = outcome.resting_order
            if order.side is Side.BID:
                buyer_limit, seller_limit = order.limit, resting.limit
                buyer_asg, seller_asg = order.assignment, resting.assignment
            else:
                buyer_limit, seller_limit = resting.limit, order.limit
                buyer_asg, seller_asg = resting.assignment, order.assignment
            stats["trade_records"].append(TradeRecord(txn, buyer_limit, seller_limit))
            feeds[txn.buyer_id].put(("fill", txn, buyer_asg))
            feeds[txn.seller_id].put(("fill", txn, seller_asg))
        stats["changes"] += 1
        snap = book.snapshot(vt, since=last_change_vt)
        last_change_vt = vt
        publication = ("market", snap, MarketEvent(order.price, order.side,
                                                   outcome.txn is not None, outcome.txn))
        for feed in feeds.values():
            feed.put(publication)

    try:
        while True:
            try:
                order = oq.get(timeout=0.002)
            except queue.Empty:
                if state.producers_done.is_set():
                    break
                continue
            process(order)
        while True:  # drain: producers are gone, empty what is left
            try:
                order = oq.get_nowait()
            except queue.Empty:
                break
            process(order)
    except Exception as exc:  # pragma: no cover - defensive surface
        state.errors.append(TraderFault(f"exchange failed: {exc!r}"))
    finally:
        state.drained.set()


def _coordinator_loop(state: _SessionState, roster_sides, assign_rng):
    cfg = state.cfg
    interval_wall = cfg.schedule.replenish_interval / cfg.time_scale
    k = 0
    while not state.stop.is_set():
        target = k * interval_wall
        remaining = target - (perf_counter() - state.start_wall)
        if remaining > 0 and state.stop.wait(remaining):
            break
        t_nominal = k * cfg.schedule.replenish_interval
        try:
            assignments = issue_assignments(t_nominal, roster_sides, cfg.schedule, assign_rng)
        except Exception as exc:
            state.errors.append(TraderFault(f"issuance failed: {exc!r}"))
            return
        for asg in assignments:
            state.feeds[asg.trader_id].put(("assign", asg, k))
        k += 1


def _trader_loop(state: _SessionState, trader, feed: FillFeed, empty_snap, records: dict):
    cfg = state.cfg
    method = cfg.delay_method or ("busy" if cfg.parallelism == "serialized" else "sleep")
    delay_ms = cfg.delay_profile.get(trader.algo, 0.0)
    delay = _make_delay(delay_ms, method)
    latest = empty_snap
    iterations = 0
    responds = 0
    seq = 0
    respond_lat: list = []
    quote_lat: list = []

    def ingest(msgs):
        """Apply fills/assignments; pick the events worth responding to.

        Executed trades are queued per trader, so a slow trader still learns
        of every transaction when it wakes up.  Un-traded shouts are not
        replayed: the trader sees the market as it is now (the newest
        event), not a tick-by-tick history of what it slept through -- that
        information asymmetry is the point of running traders concurrently.
        """
        nonlocal latest
        events = []
        newest = None
        for msg in msgs:
            kind = msg[0]
            if kind == "market":
                newest = msg
                latest = msg[1]
                if msg[2].was_trade:
                    events.append(msg)
            elif kind == "fill":
                trader.on_fill(msg[1], msg[2])
            elif kind == "assign":
                trader.assign(msg[1], msg[2])
            else:  # reject
                records["rejects"] += 1
        if newest is not None and (not events or events[-1] is not newest):
            events.append(newest)
        return events

    try:
        while not state.stop.is_set():
            events = ingest(feed.drain())

            t0 = perf_counter()
            if delay:
                delay()
            for _, snap, event in events:
                trader.respond(snap, event)
            responds += 1
            respond_lat.append(perf_counter() - t0)

            t0 = perf_counter()
            if delay:
                delay()
            order = trader.quote(latest._replace(time=state.now_virtual()))
            quote_lat.append(perf_counter() - t0)

            if order is not None:
                order.trader_seq = seq
                seq += 1
                give_up_at = None
                while True:
                    try:
                        state.order_queue.put(order, timeout=0.05)
                        break
                    except queue.Full:
                        if state.stop.is_set():
                            if give_up_at is None:
                                give_up_at = perf_counter() + 0.5
                            elif perf_counter() > give_up_at:
                                break  # exchange is gone; drop the order
            iterations += 1
    except Exception as exc:
        state.errors.append(TraderFault(f"{trader.trader_id} failed: {exc!r}"))
    finally:
        records["iterations"] = iterations
        records["responds"] = responds
        records["respond_lat"] = respond_lat
        records["quote_lat"] = quote_lat
        records["emitted"] = seq


def run_session_threaded(cfg: ThreadedConfig) -> SessionResult:
    cfg.validate()
    state = _SessionState(cfg)
    traders = build_traders(cfg)
    roster_ids = [r.trader_id for r in cfg.roster]
    roster_sides = [(r.trader_id, r.side) for r in cfg.roster]
    book = LimitOrderBook(known_traders=set(roster_ids))
    assign_rng = Random(stable_hash(cfg.seed, "assign"))
    empty_snap = book.snapshot(0.0)

    ex_stats = {"changes": 0, "rejected": 0, "trade_records": [], "order_log": []}
    trader_records = {tid: {"rejects": 0} for tid in roster_ids}

    exchange = threading.Thread(
        target=_exchange_loop, args=(state, book, ex_stats), name="exchange", daemon=True
    )
    coordinator = threading.Thread(
        target=_coordinator_loop, args=(state, roster_sides, assign_rng), name="coordinator", daemon=True
    )
    workers = [
        threading.Thread(
            target=_trader_loop,
            args=(state, traders[tid], state.feeds[tid], empty_snap, trader_records[tid]),
            name=f"trader-{tid}",
            daemon=True,
        )
        for tid in roster_ids
    ]

    state.start_wall = perf_counter()
    exchange.start()
    coordinator.start()
    for w in workers:
        w.start()

    state.stop.wait(cfg.wall_duration)
    state.stop.set()

    deadline = perf_counter() + cfg.drain_timeout
    for w in workers:
        w.join(timeout=max(0.0, deadline - perf_counter()))
    coordinator.join(timeout=max(0.0, deadline - perf_counter()))
    stuck = [w.name for w in workers if w.is_alive()]
    if coordinator.is_alive():
        stuck.append("coordinator")
    if stuck:
        state.producers_done.set()
        raise JoinTimeout(f"activities failed to stop: {stuck}")

    state.producers_done.set()
    exchange.join(timeout=cfg.drain_timeout)
    if exchange.is_alive():
        raise JoinTimeout("exchange failed to drain")

    # deliver whatever is still sitting in the feeds (fills from the drain)
    for tid in roster_ids:
        for msg in state.feeds[tid].drain():
            if msg[0] == "fill":
                traders[tid].on_fill(msg[1], msg[2])

    if state.errors:
        raise state.errors[0]

    wall_elapsed = perf_counter() - state.start_wall
    result = SessionResult(engine_mode="threaded", seed=cfg.seed)
    result.algo_by_trader = {tid: traders[tid].algo for tid in roster_ids}
    result.tape = list(book.tape)
    result.trade_records = ex_stats["trade_records"]
    result.profit_by_trader = {tid: traders[tid].balance for tid in roster_ids}
    result.fills_by_trader = {tid: len(traders[tid].blotter) for tid in roster_ids}
    result.market_changes = ex_stats["changes"]
    result.rejected_orders = ex_stats["rejected"]
    result.order_log = ex_stats["order_log"] if cfg.record_order_log else None
    result.loop_counts = {tid: trader_records[tid]["iterations"] for tid in roster_ids}
    result.respond_calls_by_trader = {
        tid: trader_records[tid]["responds"] for tid in roster_ids
    }
    result.quote_calls = sum(len(trader_records[tid]["quote_lat"]) for tid in roster_ids)
    lat: dict = {}
    for tid in roster_ids:
        algo = traders[tid].algo
        lat.setdefault((algo, "respond"), []).extend(trader_records[tid]["respond_lat"])
        lat.setdefault((algo, "quote"), []).extend(trader_records[tid]["quote_lat"])
    result.latency = {k: LatencyStats.from_samples(v) for k, v in lat.items()}
    result.realized_duration = wall_elapsed * cfg.time_scale
    result.wall_elapsed = wall_elapsed
    result.seed = cfg.seed
    result.provenance = {
        "engine": "threaded",
        "seed": cfg.seed,
        "delay_profile": dict(cfg.delay_profile),
        "parallelism": cfg.parallelism,
        "delay_method": cfg.delay_method or ("busy" if cfg.parallelism == "serialized" else "sleep"),
        "time_scale": cfg.time_scale,
        "wall_duration": cfg.wall_duration,
        "queue_capacity": cfg.queue_capacity,
        "host": f"{platform.platform()} cpython-{platform.python_version()}",
    }
    return result
