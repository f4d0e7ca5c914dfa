import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdasim.book import SYS_MAX_PRICE, SYS_MIN_PRICE, Side
from cdasim.env import (
    Assignment,
    OffsetParams,
    RangeViolation,
    ScheduleConfig,
    build_limits,
    issue_assignments,
    offset_value,
    tick_round,
)


def test_tick_round_half_up():
    assert tick_round(2.5) == 3
    assert tick_round(3.5) == 4
    assert tick_round(2.49) == 2


def test_offset_zero_params():
    p = OffsetParams(amplitude=0, wavelength=100, drift=0)
    for t in (0, 1, 17.5, 99):
        assert offset_value(t, p) == 0


def test_offset_quarter_and_half_wave():
    p = OffsetParams(amplitude=40, wavelength=100, drift=0)
    assert offset_value(25.0, p) == 40  # sin = 1
    assert offset_value(50.0, p) == 0  # sin(pi) = 0


def test_offset_periodicity():
    p = OffsetParams(amplitude=33, wavelength=77.0, drift=0)
    for t in (0.0, 5.5, 41.2, 76.9):
        assert offset_value(t, p) == offset_value(t + 77.0, p)


def test_offset_drift():
    p = OffsetParams(amplitude=0, wavelength=100, drift=0.5)
    assert offset_value(10.0, p) == 5


def test_build_limits_two_point_endpoints():
    cfg = ScheduleConfig(price_floor=50, price_ceil=150, n_per_side=2)
    demand, supply = build_limits(cfg, 0.0)
    assert demand == [50, 150] and supply == [50, 150]


def test_build_limits_spacing_20():
    # independently computed: round-half-up of 50 + i*100/19, i = 0..19
    expected = [50, 55, 61, 66, 71, 76, 82, 87, 92, 97,
                103, 108, 113, 118, 124, 129, 134, 139, 145, 150]
    assert expected == [int(math.floor(50 + i * 100 / 19 + 0.5)) for i in range(20)]
    cfg = ScheduleConfig(price_floor=50, price_ceil=150, n_per_side=20)
    demand, supply = build_limits(cfg, 0.0)
    assert demand == expected and supply == expected


def test_equilibrium_midpoint_plus_offset():
    cfg = ScheduleConfig(price_floor=50, price_ceil=150, n_per_side=8,
                         offset=OffsetParams(amplitude=40, wavelength=100))
    demand, supply = build_limits(cfg, 25.0)  # offset = +40
    assert sorted(demand) == sorted(supply)
    assert (min(demand) + max(demand)) / 2 == 100 + 40


def test_range_violation():
    cfg = ScheduleConfig(price_floor=50, price_ceil=480, n_per_side=4,
                         offset=OffsetParams(amplitude=40, wavelength=100))
    with pytest.raises(RangeViolation):
        build_limits(cfg, 25.0)  # 480 + 40 > SYS_MAX


@given(st.integers(min_value=2, max_value=40), st.floats(0, 1000))
@settings(max_examples=100, deadline=None)
def test_limits_symmetric_and_in_band(n, t):
    cfg = ScheduleConfig(price_floor=60, price_ceil=140, n_per_side=n,
                         offset=OffsetParams(amplitude=40, wavelength=300))
    demand, supply = build_limits(cfg, t)
    assert sorted(demand) == sorted(supply)
    assert all(SYS_MIN_PRICE <= x <= SYS_MAX_PRICE for x in demand)
    assert len(demand) == n


def roster(n):
    return [(f"B{i}", Side.BID) for i in range(n)] + [
        (f"S{i}", Side.ASK) for i in range(n)
    ]


def test_issue_assignments_cardinality_and_time():
    cfg = ScheduleConfig(n_per_side=20)
    out = issue_assignments(30.0, roster(20), cfg, random.Random(0))
    assert len(out) == 40
    assert all(a.issue_time == 30.0 for a in out)
    buyers = [a for a in out if a.side is Side.BID]
    sellers = [a for a in out if a.side is Side.ASK]
    assert len(buyers) == len(sellers) == 20
    assert len({a.trader_id for a in out}) == 40


def test_issue_assignments_deterministic_permutation():
    cfg = ScheduleConfig(n_per_side=6)
    a1 = issue_assignments(0.0, roster(6), cfg, random.Random(42))
    a2 = issue_assignments(0.0, roster(6), cfg, random.Random(42))
    assert a1 == a2
    a3 = issue_assignments(0.0, roster(6), cfg, random.Random(43))
    assert [x.limit for x in a1] != [x.limit for x in a3]  # seed matters


def test_issue_assignments_roster_mismatch():
    cfg = ScheduleConfig(n_per_side=5)
    with pytest.raises(ValueError):
        issue_assignments(0.0, roster(4), cfg, random.Random(0))


def test_assignment_replaces_pending(monkeypatch):
    # replacement semantics live in the trader: a new assignment supersedes
    from cdasim.traders.zic import ZicTrader

    tr = ZicTrader("B0", Side.BID, random.Random(0))
    first = Assignment("B0", Side.BID, 120, 0.0)
    second = Assignment("B0", Side.BID, 80, 30.0)
    tr.assign(first, 0)
    assert tr.active_assignment is first
    tr.assign(second, 1)
    assert tr.active_assignment is second
