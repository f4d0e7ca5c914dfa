"""AA: aggressiveness-adaptive trader.

The trader keeps a running estimate of the market equilibrium price (a
decaying-weight mean of recent trade prices) and maps a scalar
aggressiveness r in [-1, 1] onto a target price tau: r = -1 is maximally
passive (target at the band edge), r = 0 targets the equilibrium estimate,
r = +1 targets the trader's own limit (trade at any acceptable price).
The shape of the map between those anchors is controlled by theta, which
itself adapts to observed price volatility.

After every trade at price q the trader solves for the aggressiveness that
would have targeted q exactly (bisection on the monotone target map), nudges
it a relative step lambda_r and an absolute step lambda_a toward more or
less aggressive -- depending on whether its own current target would have
transacted -- and relaxes r toward that value.  A competing same-side shout
that beats the trader's own target ratchets aggressiveness the same way: a
buyer that sees a standing bid above its target must bid up to stay in the
race, and a seller undercut by a lower ask must come down.

Quotes improve on the best same-side quote by a 1/eta fraction of the gap
to the target, clamped at the limit.  Until the first trade is observed the
trader has no equilibrium estimate and quotes like ZIC.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

from ..book import SYS_MAX_PRICE, SYS_MIN_PRICE, Side
from ..env import tick_round
from .base import Trader
from .zic import zic_price


class MissingEquilibrium(RuntimeError):
    """Target price requested before any trade has been observed."""


@dataclass(frozen=True)
class AaParams:
    rho: float = 0.9  # weight decay for the equilibrium estimate
    window: int = 30  # trades kept for the estimate and volatility
    theta_min: float = -8.0
    theta_max: float = 2.0
    beta1: float = 0.15  # aggressiveness learn rate
    beta2: float = 0.3  # theta learn rate
    lambda_r: float = 0.05  # relative aggressiveness nudge
    lambda_a: float = 0.01  # absolute aggressiveness nudge
    alpha_max: float = 0.45  # volatility that saturates theta at theta_min
    eta: float = 2.0  # quote-improvement divisor
    init_r_lo: float = 0.0  # initial r drawn U(lo, hi)
    init_r_hi: float = 0.4
    init_theta: float = -1.0


def estimate_equilibrium(window, rho: float) -> Optional[float]:
    """Decaying-weight mean of trade prices, newest weighted 1, then rho..."""
    if not window:
        return None
    num = 0.0
    den = 0.0
    w = 1.0
    for price in reversed(window):
        num += w * price
        den += w
        w *= rho
    return num / den


def _ratio(r: float, theta: float) -> float:
    """(e^(r*theta) - 1) / (e^theta - 1), continuous at theta = 0."""
    if abs(theta) < 1e-9:
        return r
    return (math.exp(r * theta) - 1.0) / (math.exp(theta) - 1.0)


def relax_aggressiveness(r: float, delta: float, beta1: float) -> float:
    """One learning step of r toward delta, clamped to [-1, 1]."""
    return max(-1.0, min(1.0, r + beta1 * (delta - r)))


def target_price(
    r: float, theta: float, limit: int, p_eq: float, side: Side
) -> float:
    """Target price for aggressiveness r; monotone in r (rising for buyers,
    falling for sellers), clamped to the system band."""
    if p_eq is None:
        raise MissingEquilibrium("no equilibrium estimate yet")
    if side is Side.BID:
        if limit > p_eq:  # intra-marginal buyer
            if r >= 0.0:
                tau = p_eq + (limit - p_eq) * _ratio(r, theta)
            else:
                tau = p_eq * (1.0 - _ratio(-r, theta))
        else:  # extra-marginal buyer
            if r >= 0.0:
                tau = float(limit)
            else:
                tau = limit * (1.0 - _ratio(-r, theta))
    else:
        if limit < p_eq:  # intra-marginal seller
            if r >= 0.0:
                tau = p_eq - (p_eq - limit) * _ratio(r, theta)
            else:
                tau = p_eq + (SYS_MAX_PRICE - p_eq) * _ratio(-r, theta)
        else:  # extra-marginal seller
            if r >= 0.0:
                tau = float(limit)
            else:
                tau = limit + (SYS_MAX_PRICE - limit) * _ratio(-r, theta)
    return min(float(SYS_MAX_PRICE), max(float(SYS_MIN_PRICE), tau))


def invert_target(
    price: float, theta: float, limit: int, p_eq: float, side: Side
) -> float:
    """Aggressiveness whose target equals `price`, by bisection.

    Out-of-range prices clamp to the nearest achievable end of the map.
    """
    lo, hi = -1.0, 1.0
    t_lo = target_price(lo, theta, limit, p_eq, side)
    t_hi = target_price(hi, theta, limit, p_eq, side)
    rising = t_hi >= t_lo
    lo_val, hi_val = (t_lo, t_hi) if rising else (t_hi, t_lo)
    if price <= lo_val:
        return lo if rising else hi
    if price >= hi_val:
        return hi if rising else lo
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        t_mid = target_price(mid, theta, limit, p_eq, side)
        if abs(t_mid - price) < 0.25:
            return mid
        if (t_mid < price) == rising:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class AaTrader(Trader):
    algo = "AA"

    def __init__(self, trader_id, side, rng, params: AaParams = AaParams()):
        super().__init__(trader_id, side, rng, params)
        self.params = params
        self.r = rng.uniform(params.init_r_lo, params.init_r_hi)
        self.theta = params.init_theta
        self.p_eq: Optional[float] = None
        self.trade_window: deque = deque(maxlen=params.window)
        self.limit = None  # most recent limit price worked

    def on_assignment(self, assignment, round_index):
        self.limit = assignment.limit

    def propose_price(self, asg, snap):
        self.limit = asg.limit
        if self.p_eq is None:
            return zic_price(asg.side, asg.limit, self.rng)  # cold start
        tau = target_price(self.r, self.theta, asg.limit, self.p_eq, asg.side)
        eta = self.params.eta
        if asg.side is Side.BID:
            base = snap.best_bid if snap.best_bid is not None else SYS_MIN_PRICE
            return min(asg.limit, tick_round(base + (tau - base) / eta))
        base = snap.best_ask if snap.best_ask is not None else SYS_MAX_PRICE
        return max(asg.limit, tick_round(base - (base - tau) / eta))

    def _relax_r(self, price: float, more_aggressive: bool, p_eq: float) -> None:
        p = self.params
        r_shout = invert_target(price, self.theta, self.limit, p_eq, self.side)
        if more_aggressive:
            delta = (1.0 + p.lambda_r) * r_shout + p.lambda_a
        else:
            delta = (1.0 - p.lambda_r) * r_shout - p.lambda_a
        delta = max(-1.0, min(1.0, delta))
        self.r = relax_aggressiveness(self.r, delta, p.beta1)

    def respond(self, snap, event):
        p = self.params
        if not event.was_trade:
            # a standing same-side shout that beats our target forces us up
            if self.p_eq is None or self.limit is None or event.side is not self.side:
                return
            tau_cur = target_price(self.r, self.theta, self.limit, self.p_eq, self.side)
            if self.side is Side.BID:
                outdone = tau_cur <= event.price
            else:
                outdone = tau_cur >= event.price
            if outdone:
                self._relax_r(event.price, True, self.p_eq)
            return

        q = event.txn.price
        prev_eq = self.p_eq
        self.trade_window.append(q)

        # (a) relax aggressiveness toward the level that targeted q
        if prev_eq is not None and self.limit is not None:
            tau_cur = target_price(self.r, self.theta, self.limit, prev_eq, self.side)
            if self.side is Side.BID:
                would_trade = tau_cur >= q
            else:
                would_trade = tau_cur <= q
            self._relax_r(q, not would_trade, prev_eq)

        # (b) relax theta toward the volatility-mapped shape
        ref = prev_eq if prev_eq is not None else q
        var = sum((x - ref) ** 2 for x in self.trade_window) / len(self.trade_window)
        alpha = math.sqrt(var) / ref if ref > 0 else 0.0
        theta_star = p.theta_min + (p.theta_max - p.theta_min) * (
            1.0 - min(alpha / p.alpha_max, 1.0)
        )
        self.theta = self.theta + p.beta2 * (theta_star - self.theta)
        self.theta = max(p.theta_min, min(p.theta_max, self.theta))

        # (c) refresh the equilibrium estimate
        self.p_eq = estimate_equilibrium(self.trade_window, p.rho)
