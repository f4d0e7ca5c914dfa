"""ZIP: adaptive profit-margin trader.

Quotes at limit*(1+margin) and adapts the margin with a Widrow-Hoff-with-
momentum rule toward stochastically perturbed target prices.  The update
direction follows the classic rule table: raise the margin when the market
confirms a better price was available (a trade at or beyond our own shout),
lower it when undercut by a competing shout or when a trade we should have
taken goes to someone else.

Margins keep their sign by construction: a buyer's margin is clamped to
stay <= 0 (never bids above its limit) and a seller's to stay >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..book import Side
from ..env import tick_round
from .base import Trader


@dataclass(frozen=True)
class ZipParams:
    beta_min: float = 0.1
    beta_max: float = 0.5
    momentum_min: float = 0.0
    momentum_max: float = 0.1
    margin_min: float = 0.05
    margin_max: float = 0.35
    rel_perturb: float = 0.05  # R drawn from U(1, 1+rel) when raising
    abs_perturb: float = 5.0  # A drawn from U(0, abs) ticks when raising


def zip_quote_price(limit: int, margin: float) -> int:
    """Shout price for a given limit and signed margin, in integer ticks."""
    return tick_round(limit * (1.0 + margin))


class ZipTrader(Trader):
    algo = "ZIP"

    def __init__(self, trader_id, side, rng, params: ZipParams = ZipParams()):
        super().__init__(trader_id, side, rng, params)
        self.params = params
        self.beta = rng.uniform(params.beta_min, params.beta_max)
        self.momentum_coeff = rng.uniform(params.momentum_min, params.momentum_max)
        m0 = rng.uniform(params.margin_min, params.margin_max)
        self.margin_buy = -m0
        self.margin_sell = m0
        self.momentum = 0.0  # accumulated price change
        self.limit = None  # most recent limit price worked
        self.price = None  # real-valued shout price
        self.active = False  # working an unfilled assignment?
        self.last_shout_price = None

    @property
    def margin(self) -> float:
        return self.margin_buy if self.side is Side.BID else self.margin_sell

    # -- engine hooks --------------------------------------------------

    def on_assignment(self, assignment, round_index):
        self.limit = assignment.limit
        self.active = True
        self.price = self.limit * (1.0 + self.margin)

    def on_fill(self, txn, assignment=None):
        super().on_fill(txn, assignment)
        if self.active_assignment is None:
            self.active = False

    def propose_price(self, asg, snap):
        self.active = True
        self.limit = asg.limit
        self.price = self.limit * (1.0 + self.margin)
        return zip_quote_price(asg.limit, self.margin)

    # -- margin dynamics -----------------------------------------------

    def _target_up(self, q: float) -> float:
        r = self.rng.uniform(1.0, 1.0 + self.params.rel_perturb)
        a = self.rng.uniform(0.0, self.params.abs_perturb)
        return r * q + a

    def _target_down(self, q: float) -> float:
        r = self.rng.uniform(1.0 - self.params.rel_perturb, 1.0)
        a = self.rng.uniform(-self.params.abs_perturb, 0.0)
        return r * q + a

    def _adapt(self, target: float) -> None:
        delta = self.beta * (target - self.price)
        self.momentum = self.momentum_coeff * self.momentum + (1.0 - self.momentum_coeff) * delta
        self.price = self.price + self.momentum
        new_margin = self.price / self.limit - 1.0
        if self.side is Side.BID:
            self.margin_buy = min(0.0, new_margin)
            self.price = self.limit * (1.0 + self.margin_buy)
        else:
            self.margin_sell = max(0.0, new_margin)
            self.price = self.limit * (1.0 + self.margin_sell)

    def respond(self, snap, event):
        if self.limit is None:
            return  # never worked an order: no price context yet
        q = event.txn.price if event.was_trade else event.price
        self.last_shout_price = event.price
        p = self.price
        if self.side is Side.ASK:
            if event.was_trade:
                if p <= q:
                    self._adapt(self._target_up(q))
                elif event.side is Side.BID and self.active:
                    self._adapt(self._target_down(q))
            elif event.side is Side.ASK and self.active and p >= q:
                self._adapt(self._target_down(q))
        else:
            if event.was_trade:
                if p >= q:
                    self._adapt(self._target_down(q))
                elif event.side is Side.ASK and self.active:
                    self._adapt(self._target_up(q))
            elif event.side is Side.BID and self.active and p <= q:
                self._adapt(self._target_up(q))
