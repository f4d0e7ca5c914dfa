import pytest

from cdasim import ScheduleConfig
from cdasim.book import Order, Side
from cdasim.harness import build_roster
from cdasim.session import RosterEntry
from cdasim.threaded import FillFeed, ThreadedConfig, run_session_threaded
from cdasim.traders import ALGOS
from cdasim.traders.base import Trader


def threaded_cfg(algo_a="ZIC", algo_b="ZIC", per_side=3, a=1, wall=0.4,
                 seed=1, **kwargs):
    roster = build_roster(algo_a, algo_b, a, per_side)
    schedule = ScheduleConfig(n_per_side=per_side, replenish_interval=30.0)
    kwargs.setdefault("time_scale", 300.0)  # cover several issuance rounds
    return ThreadedConfig(duration=300.0, roster=roster, schedule=schedule,
                          seed=seed, wall_duration=wall, **kwargs)


def test_fill_feed_fifo():
    feed = FillFeed()
    for i in range(100):
        feed.put(i)
    assert feed.drain() == list(range(100))
    assert feed.drain() == []


class IdleTrader(Trader):
    """Never quotes: exercises the all-abstaining termination contract."""

    algo = "IDLE"

    def propose_price(self, asg, snap):
        return None


class RogueTrader(Trader):
    """Emits out-of-band prices to exercise the rejection path."""

    algo = "ROGUE"

    def quote(self, snap):
        if self.active_assignment is None:
            return None
        return Order(trader_id=self.trader_id, side=self.side, price=0,
                     limit=self.active_assignment.limit,
                     assignment=self.active_assignment)


@pytest.fixture
def extra_algos():
    ALGOS["IDLE"] = IdleTrader
    ALGOS["ROGUE"] = RogueTrader
    yield
    ALGOS.pop("IDLE", None)
    ALGOS.pop("ROGUE", None)


def test_zero_trade_session_terminates(extra_algos):
    cfg = threaded_cfg(algo_a="IDLE", algo_b="IDLE", a=1, wall=0.3)
    result = run_session_threaded(cfg)
    assert result.tape == []
    assert all(v == 0 for v in result.profit_by_trader.values())
    assert result.wall_elapsed < 5.0


def test_out_of_band_orders_rejected_and_reported(extra_algos):
    cfg = threaded_cfg(algo_a="ROGUE", algo_b="IDLE", a=1, wall=0.3)
    result = run_session_threaded(cfg)
    assert result.rejected_orders > 0
    assert result.tape == []


def test_fifo_per_producer_order_log():
    cfg = threaded_cfg(per_side=4, a=2, wall=0.5, record_order_log=True)
    result = run_session_threaded(cfg)
    assert result.order_log
    last_seq = {}
    for tid, seq in result.order_log:
        assert seq > last_seq.get(tid, -1)
        last_seq[tid] = seq


def test_no_lost_fills_blotters_match_tape():
    cfg = threaded_cfg(algo_a="ZIP", algo_b="ZIC", per_side=4, a=2, wall=0.6,
                       seed=7)
    result = run_session_threaded(cfg)
    # every transaction appears exactly once in each counterparty's blotter
    assert sum(result.respond_calls_by_trader.values()) > 0
    per_trader = {tid: 0 for tid in result.profit_by_trader}
    for txn in result.tape:
        per_trader[txn.buyer_id] += 1
        per_trader[txn.seller_id] += 1
    assert per_trader == result.fills_by_trader


def test_surplus_conservation_threaded():
    cfg = threaded_cfg(algo_a="SHVR", algo_b="ZIC", per_side=4, a=2, wall=0.6,
                       seed=3)
    result = run_session_threaded(cfg)
    total = 0
    for rec in result.trade_records:
        buyer_gain = abs(rec.buyer_limit - rec.txn.price)
        seller_gain = abs(rec.txn.price - rec.seller_limit)
        assert buyer_gain + seller_gain == rec.joint_surplus
        total += rec.joint_surplus
    assert total == sum(result.profit_by_trader.values())


def test_injected_delay_shows_in_latency():
    cfg = threaded_cfg(algo_a="GDX", algo_b="ZIC", per_side=3, a=1, wall=0.5,
                       delay_profile={"GDX": 10.0, "ZIC": 0.0},
                       parallelism="full", seed=11)
    result = run_session_threaded(cfg)
    gdx = result.latency[("GDX", "quote")]
    zic = result.latency[("ZIC", "quote")]
    assert gdx.n > 0 and zic.n > 0
    assert gdx.mean > zic.mean
    assert gdx.mean >= 0.008


def test_faster_runs_more_iterations():
    wins = 0
    trials = 4
    roster = (RosterEntry("B00", "ZIC", Side.BID), RosterEntry("B01", "SHVR", Side.BID),
              RosterEntry("S00", "ZIC", Side.ASK), RosterEntry("S01", "SHVR", Side.ASK))
    for s in range(trials):
        cfg = ThreadedConfig(duration=300.0, roster=roster,
                             schedule=ScheduleConfig(n_per_side=2), seed=100 + s,
                             wall_duration=0.5, time_scale=300.0,
                             delay_profile={"ZIC": 0.1, "SHVR": 10.0},
                             parallelism="full")
        result = run_session_threaded(cfg)
        fast = result.loop_counts["B00"] + result.loop_counts["S00"]
        slow = result.loop_counts["B01"] + result.loop_counts["S01"]
        if fast > slow:
            wins += 1
    assert wins >= 3


def test_provenance_recorded():
    cfg = threaded_cfg(wall=0.2, parallelism="serialized")
    result = run_session_threaded(cfg)
    prov = result.provenance
    assert prov["parallelism"] == "serialized"
    assert prov["delay_method"] == "busy"
    assert "host" in prov and prov["wall_duration"] == 0.2


def test_trades_happen_in_threaded_market():
    cfg = threaded_cfg(algo_a="ZIC", algo_b="ZIC", per_side=4, a=2, wall=0.8, seed=5)
    result = run_session_threaded(cfg)
    assert len(result.tape) > 0
    times = [t.time for t in result.tape]
    assert times == sorted(times)
