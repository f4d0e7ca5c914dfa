"""GDX: belief-based bidding with a dynamic-programming lookahead.

A sliding window of recent shouts (each marked accepted or not) feeds a
belief function f(p): the estimated probability that a quote at price p
would transact.  For a buyer bidding b,

    f(b) = (TBL(b) + AL(b)) / (TBL(b) + AL(b) + RBG(b))

with TBL = accepted bids priced <= b, AL = asks priced <= b, RBG =
rejected bids priced >= b; the seller case mirrors it.  Beliefs are
evaluated at observed prices, pinned to 0/1 at the system band edges, and
linearly interpolated in between.

Price choice maximizes expected surplus over the remaining bidding
opportunities n:

    V(n) = max_p [ f(p) * s(p) + (1 - f(p)) * gamma * V(n-1) ],  V(0) = 0

where s(p) is the surplus at p.  The trader abstains when the best
expected value is zero and falls back to a ZIC-style quote while its
history window is still empty.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ..book import SYS_MAX_PRICE, SYS_MIN_PRICE, Side
from .base import Trader
from .zic import zic_price


class ColdStart(RuntimeError):
    """No market history yet: the belief function is undefined."""


@dataclass(frozen=True)
class GdxParams:
    gamma: float = 0.9  # discount on deferred opportunities
    horizon: int = 10  # bidding opportunities at the first issuance round
    window: int = 30  # shouts kept in the history window


class ShoutRecord:
    """One observed shout; `accepted` may flip when a later trade takes it."""

    __slots__ = ("price", "side", "accepted")

    def __init__(self, price: int, side: Side, accepted: bool):
        self.price = price
        self.side = side
        self.accepted = accepted


def record_event(history: deque, event) -> None:
    """Append a shout and retro-mark the resting counterpart of a trade.

    Trades print at the resting order's price, so the resting shout is the
    most recent unaccepted record on the resting side at the trade price.
    """
    history.append(ShoutRecord(event.price, event.side, event.was_trade))
    if event.was_trade:
        txn = event.txn
        for rec in reversed(history):
            if (
                not rec.accepted
                and rec.side is txn.resting_side
                and rec.price == txn.price
            ):
                rec.accepted = True
                break


def belief_knots(history, side: Side) -> tuple[np.ndarray, np.ndarray]:
    """(prices, beliefs) for interpolation, including the band-edge pins.

    Raises ColdStart on an empty history.
    """
    if not history:
        raise ColdStart("empty history window")
    bids_acc, bids_rej, asks_acc, asks_rej = [], [], [], []
    for rec in history:
        if rec.side is Side.BID:
            (bids_acc if rec.accepted else bids_rej).append(rec.price)
        else:
            (asks_acc if rec.accepted else asks_rej).append(rec.price)
    ba = np.sort(np.asarray(bids_acc, dtype=np.int64))
    br = np.sort(np.asarray(bids_rej, dtype=np.int64))
    aa = np.sort(np.asarray(asks_acc, dtype=np.int64))
    ar = np.sort(np.asarray(asks_rej, dtype=np.int64))
    all_asks = np.sort(np.concatenate([aa, ar]))
    all_bids = np.sort(np.concatenate([ba, br]))

    observed = np.unique(np.concatenate([all_bids, all_asks]))
    interior = observed[(observed > SYS_MIN_PRICE) & (observed < SYS_MAX_PRICE)]

    if side is Side.BID:
        tbl = np.searchsorted(ba, interior, side="right")
        al = np.searchsorted(all_asks, interior, side="right")
        rbg = len(br) - np.searchsorted(br, interior, side="left")
        num = tbl + al
        den = num + rbg
        edge_lo, edge_hi = 0.0, 1.0
    else:
        tag = len(aa) - np.searchsorted(aa, interior, side="left")
        bg = len(all_bids) - np.searchsorted(all_bids, interior, side="left")
        ral = np.searchsorted(ar, interior, side="right")
        num = tag + bg
        den = num + ral
        edge_lo, edge_hi = 1.0, 0.0

    defined = den > 0
    xs = np.concatenate(([SYS_MIN_PRICE], interior[defined], [SYS_MAX_PRICE]))
    ys = np.concatenate(([edge_lo], num[defined] / den[defined], [edge_hi]))
    return xs.astype(np.float64), ys


def gd_belief(history, price: int, side: Side) -> float:
    """Belief that a quote at `price` on `side` would transact."""
    xs, ys = belief_knots(history, side)
    return float(np.interp(price, xs, ys))


def value_table(limit: int, side: Side, history, n: int, gamma: float):
    """Dynamic program over remaining opportunities.

    Returns (price, values) where values[k] = V(k) for k = 0..n and price is
    the argmax at level n, or None when V(n) is zero (abstain).  Candidate
    prices run from the band edge to the limit, so a chosen quote can never
    violate the limit.
    """
    xs, ys = belief_knots(history, side)
    if side is Side.BID:
        candidates = np.arange(SYS_MIN_PRICE, limit + 1, dtype=np.float64)
        surplus = limit - candidates
    else:
        candidates = np.arange(limit, SYS_MAX_PRICE + 1, dtype=np.float64)
        surplus = candidates - limit
    f = np.interp(candidates, xs, ys)
    immediate = f * surplus
    values = [0.0]
    best_idx = 0
    for _ in range(max(1, n)):
        ev = immediate + (1.0 - f) * gamma * values[-1]
        best_idx = int(np.argmax(ev))
        values.append(float(ev[best_idx]))
    if values[-1] <= 0.0:
        return None, values
    return int(candidates[best_idx]), values


def choose_price(limit: int, side: Side, history, n: int, gamma: float):
    """Optimal quote price for n opportunities, or None to abstain."""
    price, _ = value_table(limit, side, history, n, gamma)
    return price


class GdxTrader(Trader):
    algo = "GDX"

    def __init__(self, trader_id, side, rng, params: GdxParams = GdxParams()):
        super().__init__(trader_id, side, rng, params)
        self.params = params
        self.history: deque = deque(maxlen=params.window)
        self.remaining = params.horizon
        self.last_values: list[float] = [0.0]

    def on_assignment(self, assignment, round_index):
        # later issuance rounds leave fewer future opportunities
        self.remaining = max(1, self.params.horizon - round_index)

    def propose_price(self, asg, snap):
        try:
            price, values = value_table(
                asg.limit, asg.side, self.history, self.remaining, self.params.gamma
            )
        except ColdStart:
            return zic_price(asg.side, asg.limit, self.rng)
        self.last_values = values
        return price

    def respond(self, snap, event):
        record_event(self.history, event)
