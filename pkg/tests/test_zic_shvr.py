import random
from collections import Counter

from scipy import stats

from cdasim.book import SYS_MAX_PRICE, SYS_MIN_PRICE, MarketSnapshot, Side
from cdasim.env import Assignment
from cdasim.traders.zic import ShvrTrader, ZicTrader, shvr_price, zic_price


def snap(best_bid=None, best_ask=None):
    return MarketSnapshot(0.0, best_bid, best_ask, 0, 0, None, ())


def test_zic_degenerate_buyer():
    rng = random.Random(0)
    assert all(zic_price(Side.BID, SYS_MIN_PRICE, rng) == SYS_MIN_PRICE for _ in range(50))


def test_zic_degenerate_seller():
    rng = random.Random(0)
    assert all(zic_price(Side.ASK, SYS_MAX_PRICE, rng) == SYS_MAX_PRICE for _ in range(50))


def test_zic_uniform_chi_square():
    rng = random.Random(7)
    limit = 100
    draws = Counter(zic_price(Side.BID, limit, rng) for _ in range(10_000))
    observed = [draws.get(p, 0) for p in range(SYS_MIN_PRICE, limit + 1)]
    assert all(SYS_MIN_PRICE <= p <= limit for p in draws)
    _, pvalue = stats.chisquare(observed)
    assert pvalue > 0.01


def test_zic_trader_quotes_within_budget():
    tr = ZicTrader("B0", Side.BID, random.Random(1))
    tr.assign(Assignment("B0", Side.BID, 73, 0.0), 0)
    for _ in range(200):
        order = tr.quote(snap())
        assert SYS_MIN_PRICE <= order.price <= 73


def test_shvr_buyer_improves_best_bid():
    assert shvr_price(Side.BID, 100, 90, None) == 91


def test_shvr_buyer_clamped_at_limit():
    assert shvr_price(Side.BID, 100, 100, None) == 100
    assert shvr_price(Side.BID, 100, 120, None) == 100


def test_shvr_empty_book_stub_quotes():
    assert shvr_price(Side.ASK, 50, None, None) == SYS_MAX_PRICE == 500
    assert shvr_price(Side.BID, 50, None, None) == SYS_MIN_PRICE


def test_shvr_seller_undercuts():
    assert shvr_price(Side.ASK, 50, None, 80) == 79
    assert shvr_price(Side.ASK, 80, None, 80) == 80  # clamped at limit


def test_shvr_trader_roundtrip():
    tr = ShvrTrader("S0", Side.ASK, random.Random(2))
    tr.assign(Assignment("S0", Side.ASK, 60, 0.0), 0)
    order = tr.quote(snap(best_bid=55, best_ask=70))
    assert order.price == 69 and order.side is Side.ASK
