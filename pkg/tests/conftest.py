import random

import pytest

from cdasim import ScheduleConfig, SessionConfig
from cdasim.harness import build_roster


def small_session(algo_a="ZIC", algo_b="ZIC", per_side=4, a=2, duration=60.0,
                  seed=1, interval=15.0, **kwargs):
    """A quick sequential-session config for unit tests."""
    roster = build_roster(algo_a, algo_b, a, per_side)
    schedule = ScheduleConfig(n_per_side=per_side, replenish_interval=interval)
    return SessionConfig(duration=duration, roster=roster, schedule=schedule,
                         seed=seed, **kwargs)


@pytest.fixture
def rng():
    return random.Random(12345)
