"""Floquet spin circuits: one brickwork period drawn once and repeated.

Gates come from a :class:`GateEnsemble` (Haar U(4) or the MBL family with
coupling half-width h). The thermal-to-localized crossover is read off the
late-time plateau C_inf(h).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .circuits import check_state_qubits
from .ensembles import GateEnsemble, realization_rng
from .errors import EstimationError, InvalidParameterError
from .krylov import ComplexitySeries, run_state_complexity
from .parallel import map_realizations, summarize
from .statevector import Boundary, BrickworkLayer, brickwork_step, neel_state, random_layer

__all__ = [
    "FloquetSpinCircuit",
    "TransitionScan",
    "build_floquet_circuit",
    "FloquetSpinTask",
    "default_T",
    "saturation_window",
    "run_floquet_complexity",
    "estimate_h0",
    "scan_mbl_transition",
]


@dataclass
class FloquetSpinCircuit:
    n: int
    odd_layer: BrickworkLayer
    even_layer: BrickworkLayer
    ensemble: GateEnsemble
    boundary: Boundary = Boundary.OPEN

    def step(self, psi: np.ndarray) -> np.ndarray:
        return brickwork_step(psi, self.odd_layer, self.even_layer)


def build_floquet_circuit(n: int, ensemble: GateEnsemble, rng: np.random.Generator,
                          boundary: str = "open") -> FloquetSpinCircuit:
    if n < 2:
        raise InvalidParameterError("need N >= 2")
    even = random_layer(n, "even", rng, ensemble, boundary)
    odd = random_layer(n, "odd", rng, ensemble, boundary)
    return FloquetSpinCircuit(n, odd, even, ensemble, Boundary(boundary))


def default_T(n: int) -> int:
    return 4 * (1 << n)


def saturation_window(T: int, ensemble: GateEnsemble) -> int:
    # weak-coupling MBL runs approach their plateau slowly
    if ensemble.h is not None and ensemble.h < 0.2:
        return max(10, T // 5)
    return max(10, T // 10)


@dataclass(frozen=True)
class FloquetSpinTask:
    n: int
    T: int
    ensemble: GateEnsemble
    seed: int
    stream: tuple = ()  # extra stream key, e.g. the h index of a scan
    boundary: str = "open"
    tol: float = 1e-8

    def __call__(self, idx: int) -> ComplexitySeries:
        rng = realization_rng(self.seed, *self.stream, idx)
        circuit = build_floquet_circuit(self.n, self.ensemble, rng, self.boundary)
        return run_state_complexity(circuit.step, neel_state(self.n), self.T, tol=self.tol)


def run_floquet_complexity(n: int, ensemble: GateEnsemble, T: int | None = None, samples: int = 1,
                           master_seed: int = 0, workers: int = 1, boundary: str = "open",
                           rel_tol: float = 0.05, window: int | None = None, stream: tuple = ()):
    """Disorder-averaged C(t) with a fresh circuit per realization."""
    check_state_qubits(n)
    if samples < 1:
        raise InvalidParameterError("samples must be >= 1")
    T = default_T(n) if T is None else T
    task = FloquetSpinTask(n, T, ensemble, master_seed, tuple(stream), boundary)
    runs = map_realizations(task, samples, workers)
    if T == 0:
        return ComplexitySeries(values=np.zeros(1), stderr=np.zeros(1), n_samples=samples)
    if window is None:
        window = saturation_window(T, ensemble)
    return summarize(runs, window=min(window, T), rel_tol=rel_tol)


@dataclass
class TransitionScan:
    h: np.ndarray
    c_inf: np.ndarray
    c_inf_stderr: np.ndarray
    h0: float | None = None
    reference_h: float | None = None
    series: list | None = None


def estimate_h0(h, c_inf, level: float = 0.5) -> float:
    """First h where C_inf(h) / C_inf(h_max) crosses ``level``, linearly interpolated."""
    h = np.asarray(h, dtype=float)
    norm = np.asarray(c_inf, dtype=float) / c_inf[-1]
    for i in range(len(h) - 1):
        if norm[i] < level <= norm[i + 1]:
            return float(h[i] + (level - norm[i]) * (h[i + 1] - h[i]) / (norm[i + 1] - norm[i]))
    raise EstimationError("normalized C_inf never crosses the threshold on this grid")


def scan_mbl_transition(n: int, h_grid, T: int | None = None, samples: int = 200, master_seed: int = 0,
                        workers: int = 1, boundary: str = "open", rel_tol: float = 0.05,
                        level: float = 0.5, keep_series: bool = False) -> TransitionScan:
    grid = np.asarray(h_grid, dtype=float)
    uniq = np.unique(grid)
    if len(uniq) != len(grid):
        warnings.warn("duplicate h values in grid were dropped", stacklevel=2)
    series = []
    for k, h in enumerate(uniq):
        series.append(run_floquet_complexity(n, GateEnsemble.mbl(h), T, samples, master_seed, workers,
                                             boundary, rel_tol, stream=(k,)))
    scan = TransitionScan(
        h=uniq,
        c_inf=np.array([s.c_inf for s in series]),
        c_inf_stderr=np.array([s.c_inf_stderr for s in series]),
        reference_h=float(uniq[-1]),
        series=series if keep_series else None,
    )
    try:
        scan.h0 = estimate_h0(scan.h, scan.c_inf, level)
    except EstimationError as exc:
        raise EstimationError(str(exc), partial=scan) from None
    return scan
