from cdasim.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_sweep_writes_both_csvs(tmp_path, capsys):
    out = tmp_path / "out"
    code, stdout, _ = run_cli(
        capsys, "sweep", "--mode", "seq", "--algos", "SHVR,ZIC", "--n", "1",
        "--seed", "7", "--out", str(out), "--duration", "10", "--quiet",
    )
    assert code == 0
    detail = out / "SHVR_vs_ZIC_sequential_detail.csv"
    summary = out / "SHVR_vs_ZIC_sequential_summary.csv"
    assert detail.exists() and summary.exists()
    rows = detail.read_text().strip().splitlines()
    assert len(rows) == 1 + 19  # header + 19 ratios x n=1
    assert "total wins" in stdout


def test_unknown_algorithm_is_usage_error(capsys):
    code = main(["sweep", "--algos", "AA,NOPE", "--n", "1"])
    captured = capsys.readouterr()
    assert code != 0
    assert "NOPE" in captured.err


def test_summary_reproduces_summary_csv(tmp_path, capsys):
    out = tmp_path / "out"
    run_cli(capsys, "sweep", "--mode", "seq", "--algos", "SHVR,ZIC", "--n", "2",
            "--seed", "3", "--out", str(out), "--duration", "10", "--quiet")
    summary_path = out / "SHVR_vs_ZIC_sequential_summary.csv"
    original = summary_path.read_text()

    redo = tmp_path / "redo"
    code, stdout, _ = run_cli(
        capsys, "summary", "--detail", str(out / "SHVR_vs_ZIC_sequential_detail.csv"),
        "--out", str(redo),
    )
    assert code == 0
    assert (redo / "SHVR_vs_ZIC_sequential_summary.csv").read_text() == original


def test_run_prints_appt_and_tape(tmp_path, capsys):
    out = tmp_path / "run"
    code, stdout, _ = run_cli(
        capsys, "run", "--mode", "seq", "--algos", "ZIP,ZIC", "--seed", "5",
        "--out", str(out), "--duration", "20",
    )
    assert code == 0
    assert "APPT ZIP" in stdout and "APPT ZIC" in stdout
    tape = out / "session_5_tape.csv"
    assert tape.exists()
    assert tape.read_text().startswith("time,price,buyer_id,seller_id,resting_side")


def test_run_threaded_mode(tmp_path, capsys):
    out = tmp_path / "thr"
    code, stdout, _ = run_cli(
        capsys, "run", "--mode", "threaded", "--algos", "ZIC,ZIC",
        "--per-side", "4", "--seed", "2", "--out", str(out),
        "--wall-duration", "0.3", "--time-scale", "300",
        "--delay", "ZIC=0.1", "--parallelism", "full",
    )
    assert code == 0
    assert "engine: threaded" in stdout


def test_config_file_overrides(tmp_path, capsys):
    cfg = tmp_path / "exp.ini"
    cfg.write_text(
        "[schedule]\nprice_floor = 80\nprice_ceil = 120\nreplenish_interval = 5\n"
        "[traders]\nzip.beta_min = 0.3\nzip.beta_max = 0.3\n"
        "[engine]\nduration = 10\n"
    )
    out = tmp_path / "out"
    code, stdout, _ = run_cli(
        capsys, "run", "--algos", "ZIP,ZIC", "--config", str(cfg),
        "--out", str(out), "--seed", "1",
    )
    assert code == 0
    # duration from config: 10 virtual seconds
    assert "virtual duration: 10.0s" in stdout


def test_missing_config_file_is_reported(capsys):
    code = main(["run", "--algos", "ZIC,ZIC", "--config", "/nonexistent/x.ini"])
    captured = capsys.readouterr()
    assert code != 0
    assert "error" in captured.err.lower() or "No such file" in captured.err
