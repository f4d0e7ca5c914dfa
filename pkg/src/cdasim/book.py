"""Limit order book and matching engine for a continuous double auction.

The book holds at most one resting order per trader (a newer order from the
same trader cancels and replaces the older one).  An incoming order that
crosses the opposite best quote trades immediately at the *resting* order's
price; otherwise it rests.  All orders are for quantity 1, so a cross
produces exactly one transaction and fully consumes the incoming order.

The book itself is not thread-safe: exactly one agent of control may mutate
it at a time.  The engines provide that guarantee (the sequential engine by
construction, the threaded engine by confining the book to the exchange
thread).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

SYS_MIN_PRICE = 1
SYS_MAX_PRICE = 500


class Side(str, Enum):
    BID = "Bid"
    ASK = "Ask"

    def opposite(self) -> "Side":
        return Side.ASK if self is Side.BID else Side.BID


class PriceOutOfBand(ValueError):
    """Order price outside [SYS_MIN_PRICE, SYS_MAX_PRICE]; order rejected."""


class UnknownTrader(KeyError):
    """Order from a trader id the book was not told about."""


@dataclass(slots=True)
class Order:
    """A quote sent to the exchange.

    ``order_id`` and ``submit_time`` are stamped by the book on acceptance;
    callers leave them unset.  ``limit`` carries the private limit price the
    order was quoted under, for fill bookkeeping only -- it is never part of
    the published market data.  ``trader_seq`` is a per-trader emission
    counter used by the threaded engine's FIFO checks.
    """

    trader_id: str
    side: Side
    price: int
    quantity: int = 1
    order_id: Optional[int] = None
    submit_time: Optional[float] = None
    limit: Optional[int] = None
    assignment: Optional[object] = None
    trader_seq: Optional[int] = None


@dataclass(slots=True, frozen=True)
class Transaction:
    price: int
    buyer_id: str
    seller_id: str
    time: float
    resting_side: Side


class MarketSnapshot(NamedTuple):
    """Anonymized public view of the book at one instant."""

    time: float
    best_bid: Optional[int]
    best_ask: Optional[int]
    bid_depth: int
    ask_depth: int
    last_trade_price: Optional[int]
    recent_tape: tuple


class MarketEvent(NamedTuple):
    """The most recent shout: the order just accepted and what it did."""

    price: int
    side: Side
    was_trade: bool
    txn: Optional[Transaction]


class OutcomeKind(Enum):
    RESTED = "Rested"
    REPLACED = "Replaced"
    TRADED = "Traded"


class SubmitResult(NamedTuple):
    kind: OutcomeKind
    txn: Optional[Transaction]
    resting_order: Optional[Order]  # counterparty order consumed by a trade


def _bid_key(o: Order):
    return (o.price, -o.submit_time, -o.order_id)


def _ask_key(o: Order):
    return (-o.price, -o.submit_time, -o.order_id)


@dataclass
class LimitOrderBook:
    """One-instrument book with price-time priority and a trade tape."""

    bids: dict = field(default_factory=dict)  # trader_id -> Order
    asks: dict = field(default_factory=dict)
    tape: list = field(default_factory=list)  # Transactions, time order
    known_traders: Optional[set] = None  # None disables the membership check
    _next_order_id: int = 0

    def best_bid_order(self) -> Optional[Order]:
        if not self.bids:
            return None
        return max(self.bids.values(), key=_bid_key)

    def best_ask_order(self) -> Optional[Order]:
        if not self.asks:
            return None
        return max(self.asks.values(), key=_ask_key)

    def best_bid(self) -> Optional[int]:
        o = self.best_bid_order()
        return o.price if o else None

    def best_ask(self) -> Optional[int]:
        o = self.best_ask_order()
        return o.price if o else None

    def remove_trader_order(self, trader_id: str) -> bool:
        """Drop any resting order from this trader (both sides checked)."""
        removed = self.bids.pop(trader_id, None) is not None
        removed = (self.asks.pop(trader_id, None) is not None) or removed
        return removed

    def submit(self, order: Order, time: float) -> SubmitResult:
        """Match or rest an incoming order.

        Raises PriceOutOfBand / UnknownTrader with no state change; those
        orders are reported to the caller, never silently dropped.
        """
        if not (SYS_MIN_PRICE <= order.price <= SYS_MAX_PRICE):
            raise PriceOutOfBand(
                f"price {order.price} outside [{SYS_MIN_PRICE}, {SYS_MAX_PRICE}]"
            )
        if self.known_traders is not None and order.trader_id not in self.known_traders:
            raise UnknownTrader(order.trader_id)

        order.order_id = self._next_order_id
        self._next_order_id += 1
        order.submit_time = time

        # cancel-and-replace: at most one resting order per trader
        replaced = self.remove_trader_order(order.trader_id)

        if order.side is Side.BID:
            best = self.best_ask_order()
            if best is not None and order.price >= best.price:
                txn = Transaction(
                    price=best.price,
                    buyer_id=order.trader_id,
                    seller_id=best.trader_id,
                    time=time,
                    resting_side=Side.ASK,
                )
                del self.asks[best.trader_id]
                self.tape.append(txn)
                return SubmitResult(OutcomeKind.TRADED, txn, best)
            self.bids[order.trader_id] = order
        else:
            best = self.best_bid_order()
            if best is not None and order.price <= best.price:
                txn = Transaction(
                    price=best.price,
                    buyer_id=best.trader_id,
                    seller_id=order.trader_id,
                    time=time,
                    resting_side=Side.BID,
                )
                del self.bids[best.trader_id]
                self.tape.append(txn)
                return SubmitResult(OutcomeKind.TRADED, txn, best)
            self.asks[order.trader_id] = order

        kind = OutcomeKind.REPLACED if replaced else OutcomeKind.RESTED
        return SubmitResult(kind, None, None)

    def snapshot(self, time: float, since: float = float("inf")) -> MarketSnapshot:
        """Public view: quotes are anonymized, recent_tape holds txns with
        time strictly greater than ``since``."""
        recent: list = []
        for txn in reversed(self.tape):
            if txn.time > since:
                recent.append(txn)
            else:
                break
        recent.reverse()
        last = self.tape[-1].price if self.tape else None
        return MarketSnapshot(
            time=time,
            best_bid=self.best_bid(),
            best_ask=self.best_ask(),
            bid_depth=len(self.bids),
            ask_depth=len(self.asks),
            last_trade_price=last,
            recent_tape=tuple(recent),
        )


TAPE_CSV_HEADER = ["time", "price", "buyer_id", "seller_id", "resting_side"]


def write_tape_csv(tape, path) -> None:
    """One CSV row per transaction: time,price,buyer_id,seller_id,resting_side."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TAPE_CSV_HEADER)
        for txn in tape:
            w.writerow(
                [repr(txn.time), txn.price, txn.buyer_id, txn.seller_id, txn.resting_side.value]
            )
