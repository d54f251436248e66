"""Tests for experiment drivers, CSV I/O, figures, and the CLI."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from monolab import cli, experiments
from monolab.experiments import (
    Bandit2Config,
    EnumerateConfig,
    HiringBanditConfig,
    HiringConfig,
    OrderSensitivityConfig,
    ResultRow,
    read_csv,
    rows_to_csv_text,
    run,
    write_csv,
)

SMALL_HIRING = HiringConfig(
    mode="sequential", n_candidates=30, firm_grid=(2, 4), n_runs=12, master_seed=41
)
SMALL_DA = HiringConfig(
    mode="simultaneous", n_candidates=24, firm_grid=(2, 3), capacity=2,
    n_runs=8, master_seed=42,
)
SMALL_BANDIT2 = Bandit2Config(
    total_agents=20, n0_grid=(1, 5), k_grid=(1, 2), n_runs=30, master_seed=43
)
SMALL_HB = HiringBanditConfig(
    n_arms=8, n_rounds=3, agent_grid=(2, 3), n0=2, n_runs=12, master_seed=44
)


def with_workers(cfg, workers):
    return type(cfg)(**{**cfg.__dict__, "workers": workers})


@pytest.mark.parametrize("cfg", [SMALL_HIRING, SMALL_DA, SMALL_BANDIT2, SMALL_HB])
def test_results_do_not_depend_on_worker_count(cfg):
    baseline = rows_to_csv_text(run(cfg))
    for workers in (2, 3):
        assert rows_to_csv_text(run(with_workers(cfg, workers))) == baseline


def test_split_ranges_cover_all_replicates():
    for n_runs, workers in [(1, 1), (7, 1), (7, 3), (100, 4), (3, 16)]:
        ranges = experiments._split_ranges(n_runs, workers)
        rebuilt = [r for a, b in ranges for r in range(a, b)]
        assert rebuilt == list(range(n_runs))
        if workers <= 1:
            assert ranges == [(0, n_runs)]


def test_row_aggregation_matches_kept_values():
    rows, values = experiments.run_hiring(SMALL_HIRING, keep_values=True)
    assert len(rows) == 2 * 3  # firm grid x regimes
    for row in rows:
        vals = values[(int(row.param_value), row.regime)]
        assert len(vals) == SMALL_HIRING.n_runs
        assert row.value == pytest.approx(vals.mean())
        assert row.stderr == pytest.approx(vals.std(ddof=1) / np.sqrt(len(vals)))
        assert row.kind == "hiring-seq"
        assert row.metric == "normalized_performance"


def test_bandit2_rows_use_binomial_stderr():
    rows, values = experiments.run_bandit2(SMALL_BANDIT2, keep_values=True)
    assert len(rows) == 2 * 2
    for row in rows:
        k = int(row.regime.removeprefix("k="))
        vals = values[(int(row.param_value), k)]
        rate = vals.mean()
        assert row.value == pytest.approx(rate)
        assert row.stderr == pytest.approx(np.sqrt(rate * (1 - rate) / len(vals)))


def test_hiring_bandit_rows_cover_both_metrics():
    rows = experiments.run_hiring_bandit(SMALL_HB)
    assert len(rows) == 2 * 4 * 2  # agent grid x regimes x metrics
    metrics = {(r.regime, r.metric) for r in rows}
    assert ("mono", "total_bayesian_regret") in metrics
    assert ("poly_random", "misclassification") in metrics


def test_config_validation_messages():
    with pytest.raises(ValueError, match="mode"):
        HiringConfig(mode="parallel")
    with pytest.raises(ValueError, match="sequential mode needs"):
        HiringConfig(mode="sequential", n_candidates=10, firm_grid=(16,))
    with pytest.raises(ValueError, match="runs"):
        Bandit2Config(n_runs=0)
    with pytest.raises(ValueError, match="grid"):
        Bandit2Config(k_grid=())
    with pytest.raises(ValueError, match="cannot split"):
        Bandit2Config(total_agents=4, k_grid=(8,))
    with pytest.raises(ValueError, match="more arms than agents"):
        HiringBanditConfig(n_arms=8, agent_grid=(8,))
    with pytest.raises(TypeError):
        run(object())


def test_csv_round_trip(tmp_path):
    rows = run(SMALL_BANDIT2)
    path = tmp_path / "out.csv"
    write_csv(rows, str(path))
    assert read_csv(str(path)) == rows
    text = path.read_text()
    assert text.startswith(",".join(experiments.CSV_HEADER) + "\n")
    assert text == rows_to_csv_text(rows)


def test_csv_round_trip_preserves_floats_exactly(tmp_path):
    row = ResultRow("bandit2", "k=1", "n0", 1.0, "failure_rate",
                    0.1 + 0.2, 1e-17, 3, 9, "")
    path = tmp_path / "tiny.csv"
    write_csv([row], str(path))
    back = read_csv(str(path))[0]
    assert back.value == row.value
    assert back.stderr == row.stderr


def test_read_csv_reports_line_numbers(tmp_path):
    header = ",".join(experiments.CSV_HEADER)
    good = "bandit2,k=1,n0,1.0,failure_rate,0.5,0.1,10,0,"

    path = tmp_path / "short.csv"
    path.write_text(header + "\n" + good + "\n" + "bandit2,k=1,n0\n")
    with pytest.raises(ValueError, match=r"line 3: expected 10 fields"):
        read_csv(str(path))

    path = tmp_path / "badfloat.csv"
    path.write_text(header + "\n" + good.replace("0.5", "xx") + "\n")
    with pytest.raises(ValueError, match=r"line 2"):
        read_csv(str(path))

    path = tmp_path / "badheader.csv"
    path.write_text("a,b,c\n")
    with pytest.raises(ValueError, match=r"line 1: bad header"):
        read_csv(str(path))

    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(ValueError, match="empty file"):
        read_csv(str(path))


def test_atomic_write_leaves_no_temp_files(tmp_path):
    target = tmp_path / "data.txt"
    experiments.atomic_write_text("hello\n", str(target))
    assert target.read_text() == "hello\n"
    # failed replace (target is a directory) must clean up its temp file
    blocked = tmp_path / "adir"
    blocked.mkdir()
    with pytest.raises(OSError):
        experiments.atomic_write_text("x", str(blocked))
    leftovers = [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]
    assert leftovers == []


def test_enumerate_rows_carry_exact_fractions():
    rows = run(EnumerateConfig(n_candidates=3, n_firms=2))
    mono = [r for r in rows if r.regime == "mono"]
    poly = [r for r in rows if r.regime == "poly"]
    assert [r.exact for r in mono] == ["1/3", "1/3", "1/3"]
    assert [r.exact for r in poly] == ["1/3", "1/3", "1/3"]
    assert all(r.value == pytest.approx(1 / 3) for r in rows)


def test_order_sensitivity_rows():
    cfg = OrderSensitivityConfig(rankings=(("A", "B", "C"), ("A", "C", "B")))
    rows = run(cfg)
    by_order = {r.regime: r.exact for r in rows if r.regime != "all"}
    assert by_order == {"0-1": "B", "1-0": "C"}
    summary = [r for r in rows if r.regime == "all"]
    assert len(summary) == 1
    assert summary[0].metric == "sensitive"
    assert summary[0].value == 1.0


def test_plot_pipeline(tmp_path):
    csv_path = tmp_path / "b2.csv"
    svg_path = tmp_path / "b2.svg"
    write_csv(run(SMALL_BANDIT2), str(csv_path))
    experiments.plot_csv(str(csv_path), "bandit2", str(svg_path))
    svg = svg_path.read_text()
    assert svg.startswith("<svg")
    assert "<polyline" in svg
    assert "k=1" in svg and "k=2" in svg
    assert "failure_rate" in svg


def test_plot_rejects_empty_selection(tmp_path):
    csv_path = tmp_path / "empty.csv"
    csv_path.write_text(",".join(experiments.CSV_HEADER) + "\n")
    out = tmp_path / "fig.svg"
    with pytest.raises(ValueError, match="no rows"):
        experiments.plot_csv(str(csv_path), "bandit2", str(out))
    assert not out.exists()
    with pytest.raises(ValueError, match="unknown figure kind"):
        experiments.plot_csv(str(csv_path), "scatter", str(out))


# ---------------------------------------------------------------------------
# CLI


def test_cli_writes_csv_and_reports(tmp_path, capsys):
    out = tmp_path / "res.csv"
    code = cli.main(
        ["bandit2", "--agents", "20", "--n0", "1", "--k", "1,2",
         "--runs", "25", "--seed", "5", "--out", str(out)]
    )
    assert code == 0
    assert f"wrote {out}" in capsys.readouterr().out
    rows = read_csv(str(out))
    assert {r.regime for r in rows} == {"k=1", "k=2"}
    assert all(r.n_runs == 25 and r.seed == 5 for r in rows)


def test_cli_stdout_matches_library(capsys):
    code = cli.main(["enumerate", "--candidates", "3", "--firms", "2"])
    assert code == 0
    printed = capsys.readouterr().out
    assert printed == rows_to_csv_text(run(EnumerateConfig(3, 2)))
    assert "1/3" in printed


def test_cli_order_sensitivity(capsys):
    code = cli.main(["order-sensitivity", "--rankings", "A>B>C;A>C>B"])
    assert code == 0
    printed = capsys.readouterr().out
    assert "sensitive" in printed
    assert ",B" in printed and ",C" in printed


def test_cli_usage_errors_exit_2(tmp_path, capsys):
    assert cli.main(["bandit2", "--runs", "0", "--agents", "10", "--n0", "1", "--k", "1"]) == 2
    assert "runs" in capsys.readouterr().err
    assert cli.main(["bandit2", "--k", "2,a"]) == 2
    assert "integer list" in capsys.readouterr().err
    assert cli.main(["plot", "--csv", "x.csv", "--kind", "bandit2"]) == 2
    assert "--out" in capsys.readouterr().err
    assert cli.main(["enumerate", "--candidates", "9", "--firms", "2"]) == 2
    assert "enumeration" in capsys.readouterr().err
    assert cli.main(["order-sensitivity"]) == 2
    assert "rankings" in capsys.readouterr().err
    assert cli.main(["no-such-command"]) == 2


def test_cli_config_file_precedence(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"runs": 5, "seed": 3, "k": "1", "n0": "1", "agents": "12"}))
    code = cli.main(["bandit2", "--config", str(config), "--runs", "7"])
    assert code == 0
    rows = [line for line in capsys.readouterr().out.splitlines()[1:] if line]
    for line in rows:
        fields = line.split(",")
        assert fields[7] == "7"  # flag beats file
        assert fields[8] == "3"  # file beats default


def test_cli_rejects_unknown_config_key(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"horizon": 9}))
    assert cli.main(["bandit2", "--config", str(config)]) == 2
    err = capsys.readouterr().err
    assert "horizon" in err and "allowed" in err

    config.write_text("{not json")
    assert cli.main(["bandit2", "--config", str(config)]) == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_cli_missing_config_file_exits_3(tmp_path, capsys):
    assert cli.main(["bandit2", "--config", str(tmp_path / "nope.json")]) == 3
    assert "error" in capsys.readouterr().err


def test_cli_env_workers(monkeypatch, capsys):
    args = ["bandit2", "--agents", "10", "--n0", "1", "--k", "1", "--runs", "4"]
    monkeypatch.setenv(cli.ENV_WORKERS, "not-a-number")
    assert cli.main(args) == 2
    assert cli.ENV_WORKERS in capsys.readouterr().err
    # explicit flag wins so the bad env value is never consulted
    assert cli.main(args + ["--workers", "1"]) == 0
    capsys.readouterr()
    monkeypatch.setenv(cli.ENV_WORKERS, "0")
    assert cli.main(args) == 2
    capsys.readouterr()
    monkeypatch.setenv(cli.ENV_WORKERS, "2")
    assert cli.main(args) == 0


def test_cli_plot_end_to_end(tmp_path):
    csv_path = tmp_path / "hb.csv"
    write_csv(run(SMALL_HB), str(csv_path))
    out = tmp_path / "hb.svg"
    code = cli.main(
        ["plot", "--csv", str(csv_path), "--kind", "hiring-bandit",
         "--metric", "misclassification", "--out", str(out)]
    )
    assert code == 0
    assert "misclassification" in out.read_text()


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "monolab.cli", "enumerate", "--candidates", "2", "--firms", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "jobless_probability" in proc.stdout
