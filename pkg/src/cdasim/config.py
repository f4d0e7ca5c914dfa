"""Flat key=value experiment configuration files.

INI-style sections: [schedule], [traders], [engine], [sweep].  Every tuning
constant in the simulator can be overridden here; command-line flags win
over file values.  Example::

    [schedule]
    price_floor = 50
    price_ceil = 150
    offset_amplitude = 40
    offset_wavelength = 300
    offset_drift = 0
    replenish_interval = 30

    [traders]
    zip.beta_min = 0.1
    gdx.gamma = 0.9
    aa.theta_min = -8

    [engine]
    mode = threaded
    wall_duration = 3
    time_scale = 100
    parallelism = full
    queue_capacity = 64
    delay.ZIC = 0.1
    delay.GDX = 10

    [sweep]
    algoA = AA
    algoB = ZIC
    n_per_ratio = 100
    master_seed = 7
"""

from __future__ import annotations

import configparser
import dataclasses
from typing import Optional

from .env import OffsetParams, ScheduleConfig
from .session import TraderParams
from .traders.aa import AaParams
from .traders.gdx import GdxParams
from .traders.zip import ZipParams


def load_config(path) -> dict:
    """Parse an experiment config file into {section: {key: str}}."""
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep delay.ZIC etc. case-sensitive
    with open(path) as fh:
        parser.read_file(fh)
    return {section: dict(parser[section]) for section in parser.sections()}


def _coerce(value: str, like):
    if isinstance(like, bool):
        return value.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(like, int):
        return int(value)
    if isinstance(like, float):
        return float(value)
    return value


def _apply_prefixed(params, prefix: str, section: dict):
    """Rebuild a frozen params dataclass with `prefix.field` overrides."""
    updates = {}
    for key, value in section.items():
        if not key.startswith(prefix + "."):
            continue
        name = key[len(prefix) + 1:]
        if not hasattr(params, name):
            raise KeyError(f"unknown {prefix} parameter {name!r}")
        updates[name] = _coerce(value, getattr(params, name))
    return dataclasses.replace(params, **updates) if updates else params


def schedule_from_config(cfg: dict, base: Optional[ScheduleConfig] = None) -> ScheduleConfig:
    base = base or ScheduleConfig()
    section = cfg.get("schedule", {})
    off = base.offset
    off_updates = {}
    for key, attr in (
        ("offset_amplitude", "amplitude"),
        ("offset_wavelength", "wavelength"),
        ("offset_drift", "drift"),
    ):
        if key in section:
            off_updates[attr] = float(section[key])
    if off_updates:
        off = dataclasses.replace(off, **off_updates)
    kwargs = dict(offset=off)
    for key in ("price_floor", "price_ceil", "n_per_side"):
        if key in section:
            kwargs[key] = int(section[key])
    if "replenish_interval" in section:
        kwargs["replenish_interval"] = float(section["replenish_interval"])
    return dataclasses.replace(base, **kwargs)


def trader_params_from_config(cfg: dict, base: Optional[TraderParams] = None) -> TraderParams:
    base = base or TraderParams()
    section = cfg.get("traders", {})
    return TraderParams(
        zip=_apply_prefixed(base.zip, "zip", section),
        gdx=_apply_prefixed(base.gdx, "gdx", section),
        aa=_apply_prefixed(base.aa, "aa", section),
    )


def engine_from_config(cfg: dict) -> dict:
    """Engine section as typed values (mode, duration, threaded knobs, delays)."""
    section = cfg.get("engine", {})
    out: dict = {}
    if "mode" in section:
        out["mode"] = section["mode"]
    for key in ("duration", "wall_duration", "time_scale", "drain_timeout"):
        if key in section:
            out[key] = float(section[key])
    if "queue_capacity" in section:
        out["queue_capacity"] = int(section["queue_capacity"])
    for key in ("parallelism", "delay_method"):
        if key in section:
            out[key] = section[key]
    delays = {}
    for key, value in section.items():
        if key.startswith("delay."):
            delays[key.split(".", 1)[1].upper()] = float(value)
    if delays:
        out["delay_profile"] = delays
    return out


def sweep_from_config(cfg: dict) -> dict:
    section = cfg.get("sweep", {})
    out: dict = {}
    for key in ("algoA", "algoB"):
        if key in section:
            out[key] = section[key].upper()
    for key in ("n_per_ratio", "per_side", "master_seed", "jobs"):
        if key in section:
            out[key] = int(section[key])
    if "out" in section:
        out["out"] = section["out"]
    return out


__all__ = [
    "AaParams",
    "GdxParams",
    "OffsetParams",
    "ScheduleConfig",
    "TraderParams",
    "ZipParams",
    "engine_from_config",
    "load_config",
    "schedule_from_config",
    "sweep_from_config",
    "trader_params_from_config",
]
