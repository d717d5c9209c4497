"""Random matrix ensembles used by the circuits.

All samplers take an explicit ``numpy.random.Generator``; nothing here
touches global RNG state. Per-realization streams come from
:func:`realization_rng`, which keys a PCG64 stream on
``(master_seed, *indices)`` so results do not depend on scheduling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError, InvalidParameterError

__all__ = [
    "EnsembleKind",
    "GateEnsemble",
    "realization_rng",
    "sample_haar_unitary",
    "sample_haar_unitaries",
    "sample_haar_state",
    "sample_orthogonal",
    "sample_special_orthogonal",
    "sample_mbl_gate",
    "sample_gate",
    "operator_schmidt_values",
    "MAGIC_BASIS",
]


def realization_rng(master_seed: int, *indices: int) -> np.random.Generator:
    """Independent generator for one disorder realization."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, indices)]))


def _check_dim(dim):
    if int(dim) != dim or dim < 1:
        raise InvalidDimensionError(f"dimension must be a positive integer, got {dim!r}")


def _ginibre(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _phase_fixed_qr(z):
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    # Q -> Q diag(ph) is the same as R -> diag(ph)^-1 R
    return q * ph[..., None, :]


def sample_haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of U(dim) via Ginibre QR with phase fix."""
    _check_dim(dim)
    return _phase_fixed_qr(_ginibre(rng, (dim, dim)))


def sample_haar_unitaries(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of ``count`` independent Haar unitaries, shape (count, dim, dim)."""
    _check_dim(dim)
    if count == 0:
        return np.empty((0, dim, dim), dtype=complex)
    return _phase_fixed_qr(_ginibre(rng, (count, dim, dim)))


def sample_haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector; same law as the first column of a Haar unitary."""
    _check_dim(dim)
    z = _ginibre(rng, dim)
    return z / np.linalg.norm(z)


def sample_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of O(dim) (both determinant sectors)."""
    _check_dim(dim)
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diagonal(r))


def sample_special_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of SO(dim).

    Samples O(dim) and negates the first column when det = -1. Negating a
    column is a measure-preserving bijection between the two cosets, so the
    result is Haar on SO(dim) with no rejection.
    """
    o = sample_orthogonal(dim, rng)
    if np.linalg.det(o) < 0:
        o[:, 0] = -o[:, 0]
    return o


# Columns are the Bell states Phi+, Phi-, Psi+, Psi-.
MAGIC_BASIS = np.array(
    [[1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, -1], [1, -1, 0, 0]], dtype=complex
) / np.sqrt(2.0)
# Eigenvalues of XX, YY, ZZ on the Bell states above.
_XX_EIG = np.array([1, -1, 1, -1])
_YY_EIG = np.array([-1, 1, 1, -1])
_ZZ_EIG = np.array([1, 1, -1, -1])


def canonical_gate(a: float, b: float, c: float) -> np.ndarray:
    """exp(i(a XX + b YY + c ZZ)), diagonalized in the Bell basis."""
    phases = np.exp(1j * (a * _XX_EIG + b * _YY_EIG + c * _ZZ_EIG))
    return (MAGIC_BASIS * phases) @ MAGIC_BASIS.conj().T


def sample_mbl_gate(h: float, rng: np.random.Generator) -> np.ndarray:
    """Two-qubit gate (u1 x u2) exp(i(aXX+bYY+cZZ)) (u3 x u4).

    The u_i are Haar on U(2) and a, b, c are uniform on [-h, h].
    """
    if not h >= 0:
        raise InvalidParameterError(f"MBL coupling half-width must be >= 0, got {h!r}")
    u = sample_haar_unitaries(2, 4, rng)
    a, b, c = rng.uniform(-h, h, size=3)
    return np.kron(u[0], u[1]) @ canonical_gate(a, b, c) @ np.kron(u[2], u[3])


class EnsembleKind(str, enum.Enum):
    HAAR_U4 = "haar_u4"
    HAAR_U2 = "haar_u2"
    SO4 = "so4"
    O4 = "o4"
    MBL = "mbl"


@dataclass(frozen=True)
class GateEnsemble:
    kind: EnsembleKind = EnsembleKind.HAAR_U4
    h: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind(self.kind))
        if (self.kind is EnsembleKind.MBL) != (self.h is not None):
            raise InvalidParameterError("h must be given exactly when kind is MBL")
        if self.h is not None and self.h < 0:
            raise InvalidParameterError(f"h must be >= 0, got {self.h}")

    @classmethod
    def mbl(cls, h: float) -> "GateEnsemble":
        return cls(EnsembleKind.MBL, float(h))


def sample_gate(ensemble: GateEnsemble, rng: np.random.Generator) -> np.ndarray:
    kind = ensemble.kind
    if kind is EnsembleKind.HAAR_U4:
        return sample_haar_unitary(4, rng)
    if kind is EnsembleKind.HAAR_U2:
        u = sample_haar_unitaries(2, 2, rng)
        return np.kron(u[0], u[1])
    if kind is EnsembleKind.SO4:
        return sample_special_orthogonal(4, rng)
    if kind is EnsembleKind.O4:
        return sample_orthogonal(4, rng)
    return sample_mbl_gate(ensemble.h, rng)


def operator_schmidt_values(gate: np.ndarray) -> np.ndarray:
    """Operator-Schmidt coefficients of a 4x4 two-qubit gate.

    Reshuffles G[(i j),(k l)] -> R[(i k),(j l)] and returns the singular
    values of R divided by 2 so that their squares sum to 1 for unitaries.
    """
    r = gate.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    return np.linalg.svd(r, compute_uv=False) / 2.0
