"""Per-realization pipelines for random (non-Floquet) circuits.

Each task is a small frozen dataclass; calling it with a realization index
runs one disorder realization from the stream keyed on (seed, index). Gate
randomness and measurement randomness use separate child streams, so a
monitored run at p = 0 reproduces the unmonitored run exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import sample_haar_state, sample_haar_unitary
from .errors import InvalidParameterError, ResourceCapError
from .krylov import (
    MAX_STATE_QUBITS,
    ComplexitySeries,
    basis_completion_time,
    run_operator_complexity,
    run_state_complexity,
)
from .statevector import brickwork_step, monitored_step, neel_state, random_layer

__all__ = ["RucTask", "OperatorHaarTask", "pauli_z", "check_state_qubits"]


def check_state_qubits(n: int) -> None:
    if n > MAX_STATE_QUBITS:
        raise ResourceCapError(f"statevector runs are capped at N <= {MAX_STATE_QUBITS}, got {n}")


def _streams(seed: int, idx: int):
    gates, meas = np.random.SeedSequence([int(seed), int(idx)]).spawn(2)
    return np.random.default_rng(gates), np.random.default_rng(meas)


@dataclass(frozen=True)
class RucTask:
    """Random unitary circuit, fresh gates every step.

    circuit="brickwork": local Haar U(4) gates in even/odd layers, with
    measurements at rate ``p``. circuit="global": U_t Haar on U(2^N); since
    U_t psi is then a fresh Haar state independent of the past, the state is
    drawn directly unless ``exact_unitary`` is set.
    """

    n: int
    T: int
    seed: int
    p: float = 0.0
    circuit: str = "brickwork"
    boundary: str = "open"
    passes: str = "half_layer"
    exact_unitary: bool = False
    tol: float = 1e-8

    def __post_init__(self):
        check_state_qubits(self.n)
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameterError(f"measurement rate must lie in [0, 1], got {self.p}")
        if self.circuit not in ("brickwork", "global"):
            raise InvalidParameterError(f"unknown circuit {self.circuit!r}")
        if self.circuit == "global" and self.p > 0:
            raise InvalidParameterError("measurements are only defined for brickwork circuits")

    def evolver(self, idx: int):
        gate_rng, meas_rng = _streams(self.seed, idx)
        d = 1 << self.n
        if self.circuit == "global":
            if self.exact_unitary:
                return lambda psi: sample_haar_unitary(d, gate_rng) @ psi
            return lambda psi: sample_haar_state(d, gate_rng)
        n, boundary = self.n, self.boundary

        def step(psi):
            even = random_layer(n, "even", gate_rng, boundary=boundary)
            odd = random_layer(n, "odd", gate_rng, boundary=boundary)
            if self.p == 0.0:
                return brickwork_step(psi, odd, even)
            return monitored_step(psi, odd, even, self.p, meas_rng, passes=self.passes)[0]

        return step

    def __call__(self, idx: int) -> ComplexitySeries:
        return run_state_complexity(self.evolver(idx), neel_state(self.n), self.T, tol=self.tol)

    def completion_time(self, idx: int) -> int | None:
        """Steps until the Krylov basis is complete (None if not within T)."""
        return basis_completion_time(self.evolver(idx), neel_state(self.n), self.T, tol=self.tol)


def pauli_z(n: int, site: int) -> np.ndarray:
    diag = np.ones(1 << n)
    bits = (np.arange(1 << n) >> (n - 1 - site)) & 1
    diag[bits == 1] = -1.0
    return np.diag(diag).astype(complex)


@dataclass(frozen=True)
class OperatorHaarTask:
    """K-complexity of Z on qubit 0 under O -> U^dag O U with fresh global Haar U."""

    n: int
    T: int
    seed: int
    tol: float = 1e-8

    def __call__(self, idx: int) -> ComplexitySeries:
        rng, _ = _streams(self.seed, idx)
        d = 1 << self.n

        def step(op):
            u = sample_haar_unitary(d, rng)
            return u.conj().T @ op @ u

        return run_operator_complexity(step, pauli_z(self.n, 0), self.T, tol=self.tol)
