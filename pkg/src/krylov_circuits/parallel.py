"""Realization-level parallelism with a deterministic, index-ordered fold."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

from .analytics import aggregate
from .krylov import ComplexitySeries, detect_saturation


def map_realizations(fn: Callable[[int], ComplexitySeries], indices: Sequence[int] | int,
                     workers: int = 1) -> list[ComplexitySeries]:
    """Evaluate ``fn(i)`` for every realization index, results in index order.

    ``fn`` must be picklable when ``workers > 1``. Each realization seeds
    itself from its index, so the worker count never changes the output.
    """
    if isinstance(indices, int):
        indices = range(indices)
    indices = list(indices)
    if workers <= 1 or len(indices) <= 1:
        return [fn(i) for i in indices]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, indices, chunksize=max(1, len(indices) // (4 * workers))))


def summarize(realizations: list[ComplexitySeries], window: int | None = None,
              rel_tol: float = 0.05) -> ComplexitySeries:
    """Aggregate realizations and attach t_sat, C_inf and the stderr of C_inf."""
    avg = aggregate(realizations)
    t_sat, c_inf = detect_saturation(avg, window=window, rel_tol=rel_tol)
    w = max(10, avg.T // 10) if window is None else window
    plateaus = np.array([s.values[-w:].mean() for s in realizations])
    n = len(plateaus)
    avg.t_sat, avg.c_inf = t_sat, c_inf
    avg.c_inf_stderr = float(plateaus.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return avg
