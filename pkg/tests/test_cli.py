import csv
import json

import numpy as np
import pytest

from krylov_circuits.cli import main
from krylov_circuits.config import ExperimentConfig, read_config_file, write_config_file
from krylov_circuits.experiments import read_series_csv, run_experiment


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_ruc_outputs(tmp_path, capsys):
    assert main(["ruc", "--n", "4", "--T", "40", "--samples", "3", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "series.csv")
    assert rows[0] == ["t", "c_mean", "c_stderr", "n_samples"]
    assert len(rows) == 1 + 41 and rows[1][1] == "0.0" and rows[-1][3] == "3"
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert {"experiment", "params", "t_sat", "c_inf", "c_inf_stderr", "seed", "version"} <= set(summary)
    printed = json.loads(capsys.readouterr().out.strip())
    assert printed["c_inf"] == summary["c_inf"]


def test_monitored_zero_rate_equals_ruc(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["ruc", "--n", "4", "--T", "30", "--samples", "4", "--seed", "7", "--out", str(a)]) == 0
    assert main(["monitored", "--p", "0", "--n", "4", "--T", "30", "--samples", "4", "--seed", "7",
                 "--out", str(b)]) == 0
    assert (a / "series.csv").read_text() == (b / "series.csv").read_text()


def test_multiple_sizes_get_suffixes(tmp_path):
    assert main(["gaussian", "--n", "4,6", "--T", "20", "--samples", "2", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "series_n4.csv").exists() and (tmp_path / "manifest_n6.json").exists()


def test_analytics_coverage(capsys):
    assert main(["analytics", "coverage", "--d", "16", "--n", "82"]) == 0
    assert json.loads(capsys.readouterr().out) >= 0.9
    assert main(["analytics", "bound", "--d", "16"]) == 0
    assert json.loads(capsys.readouterr().out)["n"] == 79


@pytest.mark.parametrize(
    "argv, code, kind",
    [
        (["ruc", "--n", "20"], 3, "resource"),
        (["ruc", "--bogus"], 2, "config"),
        (["gaussian", "--n", "5"], 2, "config"),
        (["monitored", "--p", "1.5"], 2, "config"),
        (["spins", "--ensemble", "mbl"], 2, "config"),
        (["analytics", "coverage", "--d", "16"], 2, "config"),
        (["ruc", "--config", "/nonexistent/file"], 2, "config"),
    ],
)
def test_error_exit_codes(argv, code, kind, capsys):
    assert main(argv) == code
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and err.startswith(f"error: {kind}: ")


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# a comment\nn = 4\nT = 25  # steps\nsamples = 2\nseed = 3\n")
    assert read_config_file(cfg) == {"n": [4], "T": 25, "samples": 2, "seed": 3}
    assert main(["ruc", "--config", str(cfg), "--T", "12", "--out", str(tmp_path / "o")]) == 0
    manifest = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert manifest["config"]["T"] == 12 and manifest["config"]["seed"] == 3


def test_manifest_round_trip(tmp_path):
    cfg = ExperimentConfig("spins", n=[4], T=30, samples=3, ensemble="mbl", h=0.2, seed=5, out=str(tmp_path / "a"))
    run_experiment(cfg)
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    again = ExperimentConfig.from_dict(manifest["config"])
    assert again == cfg
    write_config_file(again, tmp_path / "re.cfg")
    assert ExperimentConfig.from_dict(read_config_file(tmp_path / "re.cfg")) == cfg
    again.out = str(tmp_path / "b")
    run_experiment(again)
    assert (tmp_path / "a" / "series.csv").read_text() == (tmp_path / "b" / "series.csv").read_text()
    assert len(manifest["realization_seeds"]) == 3


@pytest.mark.parametrize("experiment", ["monitored", "gaussian"])
def test_worker_count_determinism(tmp_path, experiment):
    extra = {"p": 0.4} if experiment == "monitored" else {}
    base = dict(experiment=experiment, n=[4], T=40, samples=6, seed=11, **extra)
    run_experiment(ExperimentConfig(**base, workers=1, out=str(tmp_path / "w1")))
    run_experiment(ExperimentConfig(**base, workers=2, out=str(tmp_path / "w2")))
    a = read_series_csv(tmp_path / "w1" / "series.csv")
    b = read_series_csv(tmp_path / "w2" / "series.csv")
    assert np.array_equal(a.values, b.values) and np.array_equal(a.stderr, b.stderr)


def test_scan_writes_partial_results(tmp_path):
    assert main(["mbl-scan", "--n", "3", "--T", "24", "--samples", "3", "--h-grid", "0.1,0.5",
                 "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "scan.csv")
    assert rows[0] == ["h", "c_inf", "c_inf_stderr", "n_samples"] and len(rows) == 3
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert "h0" in summary


@pytest.mark.slow
def test_ruc_default_run_saturates_at_half_dimension(tmp_path):
    assert main(["ruc", "--n", "8", "--samples", "200", "--seed", "1", "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "series.csv")) == 1 + 4 * 256 + 1
    c_inf = json.loads((tmp_path / "summary.json").read_text())["c_inf"]
    assert 124 <= c_inf <= 132
