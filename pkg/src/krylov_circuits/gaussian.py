"""Floquet Gaussian (free-fermion) circuits in the Majorana picture.

Majorana coordinates are ordered (q1, p1, q2, p2, ..., qN, pN); site i
(0-based) owns coordinates 2i and 2i+1. One Floquet period is the
orthogonal matrix O = G (+)Q G^T (+)P, where (+)P couples sites
(0,1), (2,3), ... and the shift G moves the Q layer onto
(1,2), (3,4), ..., (N-1,0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from .ensembles import realization_rng, sample_orthogonal, sample_special_orthogonal
from .errors import InvalidParameterError, LayerError, NormalizationError, ResourceCapError
from .krylov import MAX_AMBIENT_DIM, ComplexitySeries, run_state_complexity

__all__ = [
    "FloquetOrthogonal",
    "shift_matrix",
    "build_floquet_orthogonal",
    "random_floquet_orthogonal",
    "pure_product_covariance",
    "evolve_covariance",
    "floquet_power",
    "impurity_vector",
    "run_gaussian_complexity",
    "GaussianTask",
]

ORTHO_DRIFT_TOL = 1e-9


@dataclass
class FloquetOrthogonal:
    N: int
    O: np.ndarray
    homogeneous: bool
    P_blocks: list
    Q_blocks: list


def _check_n(N):
    if N < 2 or N % 2:
        raise InvalidParameterError(f"number of fermionic pairs must be even and >= 2, got {N}")


def shift_matrix(N: int) -> np.ndarray:
    """Cyclic one-site shift: block-row i holds I_2 in block-column i-1 (mod N)."""
    _check_n(N)
    return np.kron(np.roll(np.eye(N), 1, axis=0), np.eye(2))


def build_floquet_orthogonal(P_blocks, Q_blocks, N: int, homogeneous: bool = False) -> FloquetOrthogonal:
    _check_n(N)
    if len(P_blocks) != N // 2 or len(Q_blocks) != N // 2:
        raise LayerError(f"need {N // 2} P and Q blocks, got {len(P_blocks)} and {len(Q_blocks)}")
    if any(np.shape(b) != (4, 4) for b in [*P_blocks, *Q_blocks]):
        raise LayerError("two-site blocks must be 4x4")
    g = shift_matrix(N)
    o = g @ block_diag(*Q_blocks) @ g.T @ block_diag(*P_blocks)
    return FloquetOrthogonal(N, o, homogeneous, list(P_blocks), list(Q_blocks))


def random_floquet_orthogonal(N: int, rng: np.random.Generator, homogeneous: bool = False,
                              special: bool = True) -> FloquetOrthogonal:
    """Homogeneous: one P and one Q tiled over the chain; otherwise all independent."""
    _check_n(N)
    draw = sample_special_orthogonal if special else sample_orthogonal
    if homogeneous:
        p, q = draw(4, rng), draw(4, rng)
        ps, qs = [p] * (N // 2), [q] * (N // 2)
    else:
        ps = [draw(4, rng) for _ in range(N // 2)]
        qs = [draw(4, rng) for _ in range(N // 2)]
    return build_floquet_orthogonal(ps, qs, N, homogeneous)


def pure_product_covariance(N: int) -> np.ndarray:
    return np.kron(np.eye(N), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def evolve_covariance(omega: np.ndarray, O: np.ndarray) -> np.ndarray:
    return O @ omega @ O.T


def _reorthonormalize(m):
    q, r = np.linalg.qr(m)
    return q * np.sign(np.diagonal(r))


def floquet_power(O: np.ndarray, t: int) -> np.ndarray:
    """O^t by repeated multiplication, re-orthonormalized whenever drift exceeds 1e-9."""
    out = np.eye(O.shape[0])
    eye = np.eye(O.shape[0])
    for _ in range(t):
        out = O @ out
        if np.abs(out.T @ out - eye).max() > ORTHO_DRIFT_TOL:
            out = _reorthonormalize(out)
    return out


def impurity_vector(N: int, coord: int = 0) -> np.ndarray:
    v = np.zeros(2 * N)
    v[coord] = 1.0
    return v


def run_gaussian_complexity(floquet: FloquetOrthogonal, v0: np.ndarray | None = None, T: int = 512,
                            mode: str = "single_particle", tol: float = 1e-8) -> ComplexitySeries:
    """Spread complexity of a Majorana vector (or covariance matrix) under O^t.

    ``single_particle``: v(t) = O^t v0 in R^(2N) with the Euclidean product.
    ``covariance_hs``: Omega(t) = O^t Omega0 (O^t)^T under Tr(A^T B)/(2N);
    ``v0`` is then the initial covariance matrix (default: product state).
    """
    O, dim = floquet.O, 2 * floquet.N
    if mode == "single_particle":
        v = impurity_vector(floquet.N) if v0 is None else np.asarray(v0, dtype=float)
        if abs(np.linalg.norm(v) - 1.0) > 1e-10:
            raise NormalizationError("initial Majorana vector must have unit norm")
        return run_state_complexity(lambda x: O @ x, v, T, tol=tol)
    if mode == "covariance_hs":
        if dim * dim > MAX_AMBIENT_DIM:
            raise ResourceCapError(f"covariance_hs mode needs (2N)^2 <= {MAX_AMBIENT_DIM}")
        omega = pure_product_covariance(floquet.N) if v0 is None else np.asarray(v0, dtype=float)
        scale = np.sqrt(dim)
        vec = omega.reshape(-1) / scale
        if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
            raise NormalizationError("initial covariance matrix must satisfy Tr(W^T W) = 2N")

        def step(x):
            return (evolve_covariance(x.reshape(dim, dim), O)).reshape(-1)

        return run_state_complexity(step, vec, T, tol=tol)
    raise InvalidParameterError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class GaussianTask:
    """One disorder realization of a Floquet Gaussian circuit."""

    N: int
    T: int
    seed: int
    homogeneous: bool = False
    mode: str = "single_particle"
    special: bool = True

    def __call__(self, idx: int) -> ComplexitySeries:
        rng = realization_rng(self.seed, idx)
        floquet = random_floquet_orthogonal(self.N, rng, self.homogeneous, self.special)
        return run_gaussian_complexity(floquet, None, self.T, self.mode)
