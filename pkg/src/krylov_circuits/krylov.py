"""Krylov basis for discrete-time trajectories and spread / K-complexity.

The basis is grown by orthogonalizing each new trajectory element against
every earlier basis vector. Orthogonalization runs two full passes ("twice
is enough"), either as block classical Gram-Schmidt (default, vectorized)
or as modified Gram-Schmidt.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    InsufficientDataError,
    NormalizationError,
    NumericalInconsistencyError,
    ResourceCapError,
)

__all__ = [
    "KrylovBasis",
    "CoefficientRecord",
    "ComplexitySeries",
    "extend_and_project",
    "spread_complexity",
    "run_state_complexity",
    "run_operator_complexity",
    "detect_saturation",
    "basis_completion_time",
    "MAX_AMBIENT_DIM",
    "MAX_STATE_QUBITS",
    "MAX_OPERATOR_QUBITS",
]

MAX_AMBIENT_DIM = 4096
MAX_STATE_QUBITS = 12
MAX_OPERATOR_QUBITS = 5
NORM_TOL = 1e-10


@dataclass
class CoefficientRecord:
    step: int
    coefficients: np.ndarray
    residual: float


@dataclass
class ComplexitySeries:
    """C(t) for t = 0..T, either one realization or a disorder average."""

    values: np.ndarray
    stderr: np.ndarray | None = None
    n_samples: int = 1
    basis_sizes: np.ndarray | None = None
    t_sat: int | None = None
    c_inf: float | None = None
    c_inf_stderr: float | None = None

    def __len__(self):
        return len(self.values)

    @property
    def T(self) -> int:
        return len(self.values) - 1


class KrylovBasis:
    """Incrementally grown orthonormal basis in C^dim (or R^dim).

    Vectors are stored as rows of a preallocated buffer; ``vectors`` is a
    view of the filled part.
    """

    def __init__(self, dim: int, tol: float = 1e-8, method: str = "cgs2",
                 capacity: int | None = None, dtype=complex):
        if dim > MAX_AMBIENT_DIM:
            raise ResourceCapError(
                f"ambient dimension {dim} exceeds the dense-basis cap {MAX_AMBIENT_DIM}"
            )
        if method not in ("cgs2", "mgs2"):
            raise ValueError(f"unknown orthogonalization method {method!r}")
        self.dim = dim
        self.tol = tol
        self.method = method
        cap = dim if capacity is None else max(1, min(dim, capacity))
        self._buf = np.zeros((cap, dim), dtype=dtype)
        self.size = 0
        self.steps = 0

    @property
    def vectors(self) -> np.ndarray:
        return self._buf[: self.size]

    def __len__(self):
        return self.size

    def _append(self, v):
        if self.size == self._buf.shape[0]:
            grown = np.zeros((min(self.dim, 2 * self.size), self.dim), dtype=self._buf.dtype)
            grown[: self.size] = self._buf[: self.size]
            self._buf = grown
        self._buf[self.size] = v
        self.size += 1

    def _project_out(self, psi):
        k = self.vectors
        if self.method == "cgs2":
            # conj(K conj(x)) avoids materializing conj(K)
            phi = (k @ psi.conj()).conj()
            r = psi - phi @ k
            c = (k @ r.conj()).conj()
            r -= c @ k
            return phi + c, r
        phi = np.zeros(self.size, dtype=np.result_type(psi, k))
        r = psi.astype(phi.dtype, copy=True)
        for _ in range(2):
            for i in range(self.size):
                c = np.vdot(k[i], r)
                r -= c * k[i]
                phi[i] += c
        return phi, r


def extend_and_project(basis: KrylovBasis, psi: np.ndarray):
    """Project ``psi`` on the basis, appending its normalized residual if needed.

    Mutates ``basis`` in place and returns it with the coefficient record.
    The record's coefficients cover the basis after any extension.
    """
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"trajectory element has norm {norm!r}")
    if psi.shape != (basis.dim,):
        raise ValueError(f"vector shape {psi.shape} does not match basis dimension {basis.dim}")
    if basis.size == 0:
        basis._append(psi)
        rec = CoefficientRecord(basis.steps, np.array([1.0], dtype=basis._buf.dtype), 0.0)
        basis.steps += 1
        return basis, rec
    phi, r = basis._project_out(psi)
    res = float(np.linalg.norm(r))
    if res > basis.tol:
        if basis.size >= basis.dim:
            raise NumericalInconsistencyError(
                f"residual {res:.3e} with a complete basis of size {basis.dim}"
            )
        basis._append(r / res)
        phi = np.append(phi, res)
    rec = CoefficientRecord(basis.steps, phi, res)
    basis.steps += 1
    return basis, rec


def spread_complexity(record) -> float:
    """sum_n n |phi_n|^2 with 0-based ordinals n."""
    coeffs = record.coefficients if isinstance(record, CoefficientRecord) else np.asarray(record)
    w = np.abs(coeffs) ** 2
    return float(np.arange(len(w)) @ w)


def _run(trajectory_step, v0, T, tol, method, dtype=complex):
    if T < 0:
        raise ValueError("T must be non-negative")
    basis = KrylovBasis(v0.shape[0], tol=tol, method=method, capacity=T + 1, dtype=dtype)
    values = np.zeros(T + 1)
    sizes = np.zeros(T + 1, dtype=int)
    v = v0
    for t in range(T + 1):
        if t:
            v = trajectory_step(v)
        _, rec = extend_and_project(basis, v)
        values[t] = spread_complexity(rec)
        sizes[t] = basis.size
    return ComplexitySeries(values=values, basis_sizes=sizes)


def run_state_complexity(evolver: Callable[[np.ndarray], np.ndarray], psi0: np.ndarray, T: int,
                         tol: float = 1e-8, method: str = "cgs2") -> ComplexitySeries:
    """Spread complexity of psi(t) = evolver(psi(t-1)) for t = 0..T."""
    psi0 = np.asarray(psi0)
    dtype = float if np.isrealobj(psi0) else complex
    return _run(evolver, psi0, T, tol, method, dtype=dtype)


def run_operator_complexity(evolver: Callable[[np.ndarray], np.ndarray], op0: np.ndarray, T: int,
                            tol: float = 1e-8, method: str = "cgs2") -> ComplexitySeries:
    """K-complexity of O(t) = evolver(O(t-1)) under (A|B) = Tr(A^dag B)/D.

    Operators are flattened and scaled by 1/sqrt(D), which makes the
    Hilbert-Schmidt inner product Euclidean in C^(D^2).
    """
    op0 = np.asarray(op0, dtype=complex)
    d = op0.shape[0]
    if op0.shape != (d, d):
        raise ValueError("operator must be square")
    if d > 1 << MAX_OPERATOR_QUBITS:
        raise ResourceCapError(f"operator runs are capped at {MAX_OPERATOR_QUBITS} qubits")
    hs = np.vdot(op0, op0).real / d
    if abs(hs - 1.0) > NORM_TOL:
        raise NormalizationError(f"(O|O) = {hs!r}, expected 1")
    scale = np.sqrt(d)

    def step(v):
        return (evolver(v.reshape(d, d) * scale) / scale).reshape(-1)

    return _run(step, op0.reshape(-1) / scale, T, tol, method)


def detect_saturation(series, window: int | None = None, rel_tol: float = 0.05):
    """Plateau mean of the last ``window`` points and first time reaching it.

    Returns ``(t_sat, c_inf)`` where c_inf is the mean of the final window and
    t_sat the first t with C(t) >= (1 - rel_tol) * c_inf.
    """
    values = np.asarray(series.values if isinstance(series, ComplexitySeries) else series, dtype=float)
    T = len(values) - 1
    if window is None:
        window = max(10, T // 10)
    if len(values) <= window:
        raise InsufficientDataError(f"series of length {len(values)} too short for window {window}")
    c_inf = float(values[-window:].mean())
    hits = np.flatnonzero(values >= (1.0 - rel_tol) * c_inf)
    return int(hits[0]), c_inf


def basis_completion_time(evolver: Callable[[np.ndarray], np.ndarray], psi0: np.ndarray, t_max: int,
                          tol: float = 1e-8) -> int | None:
    """First t at which the Krylov basis spans the whole space, or None by t_max.

    Runs the trajectory only as far as needed; the spread complexity itself
    is not recorded.
    """
    psi0 = np.asarray(psi0)
    dim = psi0.shape[0]
    basis = KrylovBasis(dim, tol=tol, dtype=float if np.isrealobj(psi0) else complex)
    v = psi0
    for t in range(t_max + 1):
        if t:
            v = evolver(v)
        extend_and_project(basis, v)
        if basis.size == dim:
            return t
    return None
