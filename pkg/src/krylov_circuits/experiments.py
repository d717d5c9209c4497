"""Experiment pipelines behind the CLI: run, summarize, write CSV/JSON."""

from __future__ import annotations

import csv
import json
import logging
import time
from pathlib import Path

import numpy as np

from . import __version__
from .circuits import RucTask
from .config import ExperimentConfig
from .ensembles import GateEnsemble
from .gaussian import GaussianTask
from .krylov import ComplexitySeries
from .parallel import map_realizations, summarize
from .spins import FloquetSpinTask, default_T, saturation_window, scan_mbl_transition

log = logging.getLogger(__name__)

GAUSSIAN_DEFAULT_T = 512
SERIES_HEADER = ["t", "c_mean", "c_stderr", "n_samples"]


def write_series_csv(series: ComplexitySeries, path) -> None:
    stderr = series.stderr if series.stderr is not None else np.zeros(len(series))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SERIES_HEADER)
        for t, (c, e) in enumerate(zip(series.values, stderr)):
            w.writerow([t, repr(float(c)), repr(float(e)), series.n_samples])


def read_series_csv(path) -> ComplexitySeries:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return ComplexitySeries(
        values=np.array([float(r["c_mean"]) for r in rows]),
        stderr=np.array([float(r["c_stderr"]) for r in rows]),
        n_samples=int(rows[0]["n_samples"]) if rows else 0,
    )


def _json_float(x):
    return None if x is None else float(x)


def _series_for(config: ExperimentConfig, n: int) -> tuple[ComplexitySeries, int]:
    """Run one system size; returns the summarized series and the window used."""
    exp = config.experiment
    if exp in ("ruc", "monitored"):
        T = config.T or default_T(n)
        task = RucTask(n, T, config.seed, p=config.p, circuit=config.circuit,
                       boundary=config.boundary, passes=config.passes)
        window = config.window
    elif exp == "gaussian":
        T = config.T or GAUSSIAN_DEFAULT_T
        task = GaussianTask(n, T, config.seed, config.homogeneous, config.mode)
        window = config.window
    elif exp == "spins":
        ens = GateEnsemble() if config.ensemble == "haar" else GateEnsemble.mbl(config.h)
        T = config.T or default_T(n)
        task = FloquetSpinTask(n, T, ens, config.seed, boundary=config.boundary)
        window = config.window or saturation_window(T, ens)
    else:
        raise ValueError(exp)
    runs = map_realizations(task, config.samples, config.workers)
    return summarize(runs, window=window, rel_tol=config.rel_tol), T


def _seed_keys(config: ExperimentConfig, extra=()):
    return [[config.seed, *extra, i] for i in range(config.samples)]


def run_experiment(config: ExperimentConfig) -> list[dict]:
    """Run the configured experiment and write its output files.

    For every system size this writes ``series[_n{N}].csv``,
    ``summary[_n{N}].json`` and ``manifest[_n{N}].json`` under ``config.out``.
    Returns the summary dicts.
    """
    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    summaries = []
    for n in config.n:
        suffix = "" if len(config.n) == 1 else f"_n{n}"
        start = time.perf_counter()
        params = {k: v for k, v in config.to_dict().items() if k not in ("out", "workers", "seed")}
        params["n"] = n
        if config.experiment == "mbl_scan":
            summary, seeds = _run_scan(config, n, out, suffix, params)
        else:
            series, T = _series_for(config, n)
            params["T"] = T
            write_series_csv(series, out / f"series{suffix}.csv")
            summary = {
                "experiment": config.experiment,
                "params": params,
                "t_sat": series.t_sat,
                "c_inf": _json_float(series.c_inf),
                "c_inf_stderr": _json_float(series.c_inf_stderr),
                "seed": config.seed,
                "version": __version__,
            }
            seeds = _seed_keys(config)
        elapsed = time.perf_counter() - start
        (out / f"summary{suffix}.json").write_text(json.dumps(summary, indent=2) + "\n")
        manifest = {
            "config": config.to_dict(),
            "version": __version__,
            "wall_clock_s": elapsed,
            "realization_seeds": seeds,
            "summary": {k: summary[k] for k in ("t_sat", "c_inf", "c_inf_stderr", "h0") if k in summary},
        }
        (out / f"manifest{suffix}.json").write_text(json.dumps(manifest, indent=2) + "\n")
        log.info("%s n=%d done in %.1fs", config.experiment, n, elapsed)
        summaries.append(summary)
    return summaries


def _run_scan(config, n, out, suffix, params):
    from .errors import EstimationError

    h0, error = None, None
    try:
        scan = scan_mbl_transition(n, config.h_grid, config.T, config.samples, config.seed,
                                   config.workers, config.boundary, config.rel_tol, keep_series=True)
        h0 = scan.h0
    except EstimationError as exc:
        scan, error = exc.partial, str(exc)
    params["T"] = config.T or default_T(n)
    with open(out / f"scan{suffix}.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["h", "c_inf", "c_inf_stderr", "n_samples"])
        for h, c, e in zip(scan.h, scan.c_inf, scan.c_inf_stderr):
            w.writerow([repr(float(h)), repr(float(c)), repr(float(e)), config.samples])
    for k, s in enumerate(scan.series):
        write_series_csv(s, out / f"series{suffix}_h{k}.csv")
    ref = scan.series[-1]
    summary = {
        "experiment": config.experiment,
        "params": params,
        "t_sat": ref.t_sat,
        "c_inf": _json_float(ref.c_inf),
        "c_inf_stderr": _json_float(ref.c_inf_stderr),
        "h0": h0,
        "seed": config.seed,
        "version": __version__,
    }
    if error:
        summary["h0_error"] = error
    seeds = [[config.seed, k, i] for k in range(len(scan.h)) for i in range(config.samples)]
    return summary, seeds
