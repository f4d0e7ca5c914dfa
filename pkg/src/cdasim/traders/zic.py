"""Zero-intelligence constrained (ZIC) and best-quote shaver (SHVR) traders."""

from __future__ import annotations

from ..book import SYS_MAX_PRICE, SYS_MIN_PRICE, Side
from .base import Trader


def zic_price(side: Side, limit: int, rng) -> int:
    """Uniform integer draw on the profitable side of the limit."""
    if side is Side.BID:
        return rng.randint(SYS_MIN_PRICE, limit)
    return rng.randint(limit, SYS_MAX_PRICE)


class ZicTrader(Trader):
    algo = "ZIC"

    def propose_price(self, asg, snap):
        return zic_price(asg.side, asg.limit, self.rng)


def shvr_price(side: Side, limit: int, best_bid, best_ask) -> int:
    """Improve the best same-side quote by one tick, clamped at the limit.

    With an empty book side the quote is a stub at the band edge.
    """
    if side is Side.BID:
        if best_bid is None:
            return SYS_MIN_PRICE
        return min(limit, best_bid + 1)
    if best_ask is None:
        return SYS_MAX_PRICE
    return max(limit, best_ask - 1)


class ShvrTrader(Trader):
    algo = "SHVR"

    def propose_price(self, asg, snap):
        return shvr_price(asg.side, asg.limit, snap.best_bid, snap.best_ask)
