import pytest

from cdasim.config import (
    engine_from_config,
    load_config,
    schedule_from_config,
    sweep_from_config,
    trader_params_from_config,
)


@pytest.fixture
def cfg_file(tmp_path):
    path = tmp_path / "exp.ini"
    path.write_text(
        """
[schedule]
price_floor = 60
price_ceil = 140
offset_amplitude = 25
offset_wavelength = 120
offset_drift = 0.1
replenish_interval = 15
n_per_side = 10

[traders]
zip.beta_min = 0.2
zip.beta_max = 0.4
gdx.gamma = 0.85
gdx.horizon = 6
aa.theta_min = -6
aa.eta = 3

[engine]
mode = threaded
wall_duration = 2.5
time_scale = 120
parallelism = full
queue_capacity = 32
delay.ZIC = 0.1
delay.GDX = 10

[sweep]
algoA = AA
algoB = ZIC
n_per_ratio = 50
master_seed = 99
"""
    )
    return path


def test_schedule_section(cfg_file):
    sched = schedule_from_config(load_config(cfg_file))
    assert sched.price_floor == 60 and sched.price_ceil == 140
    assert sched.offset.amplitude == 25
    assert sched.offset.wavelength == 120
    assert sched.offset.drift == pytest.approx(0.1)
    assert sched.replenish_interval == 15
    assert sched.n_per_side == 10


def test_trader_params_section(cfg_file):
    tp = trader_params_from_config(load_config(cfg_file))
    assert tp.zip.beta_min == 0.2 and tp.zip.beta_max == 0.4
    assert tp.gdx.gamma == 0.85 and tp.gdx.horizon == 6
    assert tp.aa.theta_min == -6 and tp.aa.eta == 3
    # untouched values keep their defaults
    assert tp.aa.theta_max == 2.0


def test_unknown_trader_key_rejected(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[traders]\nzip.nonsense = 1\n")
    with pytest.raises(KeyError):
        trader_params_from_config(load_config(path))


def test_engine_section(cfg_file):
    eng = engine_from_config(load_config(cfg_file))
    assert eng["mode"] == "threaded"
    assert eng["wall_duration"] == 2.5
    assert eng["time_scale"] == 120
    assert eng["parallelism"] == "full"
    assert eng["queue_capacity"] == 32
    assert eng["delay_profile"] == {"ZIC": 0.1, "GDX": 10.0}


def test_sweep_section(cfg_file):
    sw = sweep_from_config(load_config(cfg_file))
    assert sw == {"algoA": "AA", "algoB": "ZIC", "n_per_ratio": 50, "master_seed": 99}
