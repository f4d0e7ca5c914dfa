"""Common trader machinery: assignment handling, quoting, fill bookkeeping.

Every algorithm implements two hooks behind one interface:

* ``quote(snap)``     -- propose an order for the active assignment, or None;
* ``respond(snap, event)`` -- digest one market event (a shout, possibly a
  trade) and update internal state.

Profit on a fill is the absolute difference between the limit price of the
assignment the order was quoted under and the transaction price.  A fill
that arrives for an order quoted under an assignment that has since been
superseded still pays out against the originating limit (this can only
happen in the threaded engine, where cancellation is not instantaneous).

Each trader owns a private random source; engines guarantee that quote and
respond for one trader never run concurrently with each other.
"""

from __future__ import annotations

from typing import Optional

from ..book import (
    SYS_MAX_PRICE,
    SYS_MIN_PRICE,
    MarketEvent,
    MarketSnapshot,
    Order,
    Side,
    Transaction,
)
from ..env import Assignment


class FillWithoutAssignment(RuntimeError):
    """A fill arrived that cannot be tied to any assignment: engine bug."""


class Trader:
    algo = "BASE"

    def __init__(self, trader_id: str, side: Side, rng, params=None):
        self.trader_id = trader_id
        self.side = side
        self.rng = rng
        self.balance = 0
        self.blotter: list[Transaction] = []
        self.active_assignment: Optional[Assignment] = None
        self.current_quote: Optional[Order] = None
        self.n_fills = 0

    # -- engine hooks ------------------------------------------------------

    def assign(self, assignment: Assignment, round_index: int = 0) -> None:
        """Receive a fresh client order, superseding any unfilled one."""
        self.active_assignment = assignment
        self.current_quote = None
        self.on_assignment(assignment, round_index)

    def quote(self, snap: MarketSnapshot) -> Optional[Order]:
        asg = self.active_assignment
        if asg is None:
            return None
        price = self.propose_price(asg, snap)
        if price is None:
            return None
        price = max(SYS_MIN_PRICE, min(SYS_MAX_PRICE, price))
        order = Order(
            trader_id=self.trader_id,
            side=asg.side,
            price=price,
            limit=asg.limit,
            assignment=asg,
        )
        self.current_quote = order
        return order

    def on_fill(self, txn: Transaction, assignment: Optional[Assignment] = None) -> None:
        """Book profit for a transaction this trader took part in.

        `assignment` is the one the filled order was quoted under; None
        means "the active one" (always the case in the sequential engine).
        """
        if assignment is None:
            assignment = self.active_assignment
        if assignment is None:
            raise FillWithoutAssignment(
                f"{self.trader_id} filled at {txn.price} with no assignment"
            )
        self.balance += abs(assignment.limit - txn.price)
        self.blotter.append(txn)
        self.n_fills += 1
        if assignment is self.active_assignment:
            self.active_assignment = None
            self.current_quote = None

    # -- algorithm hooks ---------------------------------------------------

    def on_assignment(self, assignment: Assignment, round_index: int) -> None:
        pass

    def propose_price(self, asg: Assignment, snap: MarketSnapshot) -> Optional[int]:
        raise NotImplementedError

    def respond(self, snap: MarketSnapshot, event: MarketEvent) -> None:
        pass
