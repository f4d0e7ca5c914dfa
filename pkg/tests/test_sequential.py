import pytest
from scipy import stats

from cdasim import ConfigInvalid, ScheduleConfig, SessionConfig
from cdasim.book import SYS_MAX_PRICE, SYS_MIN_PRICE
from cdasim.harness import build_roster
from cdasim.sequential import run_session_sequential

from conftest import small_session


def test_clock_increment_and_poll_count():
    # 40 traders: 1/40 = 0.025 virtual seconds per poll, 12000 polls in 300s
    cfg = SessionConfig(duration=300.0, roster=build_roster("ZIC", "ZIC", 10, 20),
                        schedule=ScheduleConfig(n_per_side=20), seed=5)
    result = run_session_sequential(cfg)
    assert len(cfg.roster) == 40
    assert 1 / len(cfg.roster) == 0.025
    assert result.quote_calls == 12_000
    assert sum(result.poll_counts.values()) == 12_000


def test_deterministic_byte_equal():
    cfg = small_session(seed=123, duration=120.0)
    r1 = run_session_sequential(cfg)
    r2 = run_session_sequential(cfg)
    assert r1.to_canonical_json() == r2.to_canonical_json()
    r3 = run_session_sequential(small_session(seed=124, duration=120.0))
    assert r1.to_canonical_json() != r3.to_canonical_json()


def test_trader_rng_invariant_to_roster_order():
    cfg = small_session(algo_a="ZIP", algo_b="ZIC", seed=9, duration=60.0)
    shuffled = SessionConfig(
        duration=cfg.duration,
        roster=tuple(reversed(cfg.roster)),
        schedule=cfg.schedule,
        trader_params=cfg.trader_params,
        seed=cfg.seed,
    )
    r1 = run_session_sequential(cfg)
    r2 = run_session_sequential(shuffled)
    assert r1.profit_by_trader == r2.profit_by_trader


def test_fair_polling_multinomial():
    cfg = small_session(per_side=5, a=2, duration=2000.0, seed=77, interval=100.0)
    result = run_session_sequential(cfg)
    counts = list(result.poll_counts.values())
    _, p = stats.chisquare(counts)
    assert p > 0.001


def test_respond_fanout_matches_market_changes():
    cfg = small_session(algo_a="ZIP", algo_b="SHVR", seed=3, duration=90.0)
    result = run_session_sequential(cfg)
    assert result.market_changes > 0
    for tid, n in result.respond_calls_by_trader.items():
        assert n == result.market_changes


def test_virtual_time_independent_of_trader_mix():
    # same duration and N: identical poll counts whatever the algorithms cost
    polls = []
    for pair in (("ZIC", "ZIC"), ("GDX", "AA")):
        cfg = small_session(algo_a=pair[0], algo_b=pair[1], seed=4, duration=45.0)
        polls.append(run_session_sequential(cfg).quote_calls)
    assert polls[0] == polls[1]


def test_surplus_conservation_and_profit_totals():
    cfg = small_session(algo_a="ZIP", algo_b="ZIC", per_side=8, a=4,
                        duration=150.0, seed=21, interval=30.0)
    result = run_session_sequential(cfg)
    assert len(result.tape) > 0
    joint = 0
    for rec in result.trade_records:
        buyer_gain = rec.buyer_limit - rec.txn.price
        seller_gain = rec.txn.price - rec.seller_limit
        assert buyer_gain >= 0 and seller_gain >= 0
        assert buyer_gain + seller_gain == rec.joint_surplus
        joint += rec.joint_surplus
    assert joint == sum(result.profit_by_trader.values())


def test_tape_times_non_decreasing_and_within_duration():
    cfg = small_session(per_side=6, a=3, seed=8, duration=120.0)
    result = run_session_sequential(cfg)
    times = [t.time for t in result.tape]
    assert times == sorted(times)
    assert all(0 <= t < 120.0 for t in times)


def test_all_quotes_respect_band():
    cfg = small_session(algo_a="AA", algo_b="GDX", per_side=6, a=3,
                        seed=13, duration=120.0)
    result = run_session_sequential(cfg)
    for txn in result.tape:
        assert SYS_MIN_PRICE <= txn.price <= SYS_MAX_PRICE


def test_invalid_configs_rejected():
    cfg = small_session()
    with pytest.raises(ConfigInvalid):
        run_session_sequential(
            SessionConfig(duration=-1, roster=cfg.roster, schedule=cfg.schedule, seed=1))
    with pytest.raises(ConfigInvalid):  # unequal buyer/seller counts
        run_session_sequential(
            SessionConfig(duration=10, roster=cfg.roster[:-1], schedule=cfg.schedule, seed=1))
    with pytest.raises(ConfigInvalid):  # duplicate trader id
        dup = tuple(list(cfg.roster[:-1]) + [cfg.roster[0]])
        run_session_sequential(
            SessionConfig(duration=10, roster=dup, schedule=cfg.schedule, seed=1))


def test_latency_stats_populated():
    cfg = small_session(algo_a="GDX", algo_b="ZIC", seed=2, duration=30.0)
    result = run_session_sequential(cfg)
    assert result.latency[("GDX", "quote")].n > 0
    assert result.latency[("ZIC", "quote")].n > 0
    assert result.latency[("GDX", "quote")].p99 >= 0
