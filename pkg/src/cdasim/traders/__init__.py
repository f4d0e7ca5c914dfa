"""Trading algorithms behind one quote/respond interface."""

from __future__ import annotations

from .aa import AaParams, AaTrader
from .base import FillWithoutAssignment, Trader
from .gdx import ColdStart, GdxParams, GdxTrader
from .zic import ShvrTrader, ZicTrader
from .zip import ZipParams, ZipTrader

ALGOS = {
    "ZIC": ZicTrader,
    "SHVR": ShvrTrader,
    "ZIP": ZipTrader,
    "GDX": GdxTrader,
    "AA": AaTrader,
}


def make_trader(algo: str, trader_id: str, side, rng, trader_params=None) -> Trader:
    """Instantiate a trader by algorithm ticker (case-insensitive)."""
    key = algo.upper()
    if key not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {sorted(ALGOS)}")
    cls = ALGOS[key]
    kwargs = {}
    if trader_params is not None:
        per_algo = trader_params.for_algo(key)
        if per_algo is not None:
            kwargs["params"] = per_algo
    return cls(trader_id, side, rng, **kwargs)


__all__ = [
    "ALGOS",
    "AaParams",
    "AaTrader",
    "ColdStart",
    "FillWithoutAssignment",
    "GdxParams",
    "GdxTrader",
    "ShvrTrader",
    "Trader",
    "ZicTrader",
    "ZipParams",
    "ZipTrader",
    "make_trader",
]
