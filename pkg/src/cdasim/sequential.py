"""Time-sliced sequential engine.

One agent of control runs the whole market session on a simulated clock:
each iteration polls a single randomly chosen trader for a quote, feeds any
emitted order to the matching engine, fans the resulting market event out to
every trader's respond hook, and advances the clock by 1/N virtual seconds
(N = number of traders).  Every trader therefore gets, on average, one
quoting opportunity per simulated second, and compute cost can never alter
the virtual-time trajectory.

Given the same (config, seed) the engine is bit-for-bit reproducible: trader
selection uses one seeded stream, assignment dealing another, and each
trader owns a private stream derived from (seed, trader_id) so behavior is
invariant to roster-order changes.

At every issuance round all traders receive fresh assignments at once;
resting quotes from the previous round are withdrawn from the book first
(the client order they worked was superseded).  Respond hooks run only when
market data actually changed: an order rested, replaced, or traded.
"""

from __future__ import annotations

from random import Random
from time import perf_counter

from .book import LimitOrderBook, MarketEvent, OutcomeKind, Side
from .env import issue_assignments
from .session import (
    LatencyStats,
    SessionConfig,
    SessionResult,
    TradeRecord,
    TraderFault,
    stable_hash,
)
from .traders import make_trader


def build_traders(cfg: SessionConfig) -> dict:
    return {
        r.trader_id: make_trader(
            r.algo,
            r.trader_id,
            r.side,
            Random(stable_hash(cfg.seed, "trader", r.trader_id)),
            cfg.trader_params,
        )
        for r in cfg.roster
    }


def run_session_sequential(cfg: SessionConfig) -> SessionResult:
    cfg.validate()
    wall_start = perf_counter()

    traders = build_traders(cfg)
    # canonical id order: the session is invariant to roster permutation
    roster_ids = sorted(r.trader_id for r in cfg.roster)
    n = len(roster_ids)
    book = LimitOrderBook(known_traders=set(roster_ids))
    select_rng = Random(stable_hash(cfg.seed, "select"))
    assign_rng = Random(stable_hash(cfg.seed, "assign"))

    result = SessionResult(engine_mode="sequential", seed=cfg.seed)
    result.algo_by_trader = {tid: traders[tid].algo for tid in roster_ids}
    result.poll_counts = {tid: 0 for tid in roster_ids}
    result.respond_calls_by_trader = {tid: 0 for tid in roster_ids}
    lat: dict = {}
    for tid in roster_ids:
        algo = traders[tid].algo
        lat.setdefault((algo, "quote"), [])
        lat.setdefault((algo, "respond"), [])

    roster_sides = [(r.trader_id, r.side) for r in cfg.roster]
    interval = cfg.schedule.replenish_interval
    total_steps = round(cfg.duration * n)
    next_round = 0
    last_change_time = float("-inf")
    cur_snap = book.snapshot(0.0)

    for step in range(total_steps):
        t = step / n

        if next_round is not None and t >= next_round * interval - 1e-9:
            for tid in roster_ids:
                book.remove_trader_order(tid)  # superseded client orders
            for asg in issue_assignments(t, roster_sides, cfg.schedule, assign_rng):
                traders[asg.trader_id].assign(asg, next_round)
            next_round += 1
            if next_round * interval >= cfg.duration:
                next_round = None
            cur_snap = book.snapshot(t)

        tid = roster_ids[select_rng.randrange(n)]
        trader = traders[tid]
        result.poll_counts[tid] += 1
        result.quote_calls += 1
        t0 = perf_counter()
        try:
            order = trader.quote(cur_snap._replace(time=t))
        except Exception as exc:  # pragma: no cover - defensive surface
            raise TraderFault(f"{tid} quote failed: {exc!r}") from exc
        lat[(trader.algo, "quote")].append(perf_counter() - t0)
        if order is None:
            continue

        try:
            outcome = book.submit(order, t)
        except Exception as exc:
            raise TraderFault(f"{tid} emitted unacceptable order: {exc!r}") from exc

        if outcome.kind is OutcomeKind.TRADED:
            txn = outcome.txn
            resting = outcome.resting_order
            if order.side is Side.BID:
                buyer_limit, seller_limit = order.limit, resting.limit
            else:
                buyer_limit, seller_limit = resting.limit, order.limit
            traders[txn.buyer_id].on_fill(txn)
            traders[txn.seller_id].on_fill(txn)
            result.trade_records.append(TradeRecord(txn, buyer_limit, seller_limit))

        result.market_changes += 1
        event = MarketEvent(order.price, order.side, outcome.txn is not None, outcome.txn)
        cur_snap = book.snapshot(t, since=last_change_time)
        last_change_time = t
        for rid in roster_ids:
            responder = traders[rid]
            result.respond_calls_by_trader[rid] += 1
            t0 = perf_counter()
            try:
                responder.respond(cur_snap, event)
            except Exception as exc:  # pragma: no cover - defensive surface
                raise TraderFault(f"{rid} respond failed: {exc!r}") from exc
            lat[(responder.algo, "respond")].append(perf_counter() - t0)

    result.tape = list(book.tape)
    result.profit_by_trader = {tid: traders[tid].balance for tid in roster_ids}
    result.fills_by_trader = {tid: len(traders[tid].blotter) for tid in roster_ids}
    result.latency = {k: LatencyStats.from_samples(v) for k, v in lat.items()}
    result.realized_duration = total_steps / n
    result.wall_elapsed = perf_counter() - wall_start
    result.provenance = {"engine": "sequential", "seed": cfg.seed}
    return result
