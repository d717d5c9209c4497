"""Exact statevector evolution for brickwork circuits with Z measurements.

States are plain complex numpy vectors of length 2**N. Qubit ``q`` is
tensor axis ``q`` of ``psi.reshape([2] * N)``, i.e. qubit 0 is the most
significant bit of the basis index.

Links are 0-based: the even layer couples (0,1), (2,3), ... and the odd
layer couples (1,2), (3,4), ... With periodic boundaries (even N only) the
odd layer also carries the wrap-around link (N-1, 0).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .ensembles import GateEnsemble, EnsembleKind, sample_gate, sample_haar_unitaries
from .errors import InvalidParameterError, LayerError

__all__ = [
    "Boundary",
    "Parity",
    "MeasurementRecord",
    "BrickworkLayer",
    "n_qubits",
    "basis_state",
    "neel_state",
    "layer_links",
    "random_layer",
    "apply_two_qubit_gate",
    "apply_layer",
    "brickwork_step",
    "measure_site",
    "measurement_pass",
    "monitored_step",
]

_OUTCOME_TOL = 1e-14


class Boundary(str, enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class MeasurementRecord:
    step: int
    site: int
    outcome: str  # "+" for Z = +1 (bit 0), "-" for Z = -1
    probability: float


def n_qubits(psi: np.ndarray) -> int:
    n = int(psi.shape[0]).bit_length() - 1
    if psi.ndim != 1 or 1 << n != psi.shape[0] or n < 1:
        raise InvalidParameterError(f"state length {psi.shape} is not 2**N")
    return n


def basis_state(bits) -> np.ndarray:
    bits = list(bits)
    psi = np.zeros(1 << len(bits), dtype=complex)
    psi[int("".join(str(int(b)) for b in bits), 2)] = 1.0
    return psi


def neel_state(n: int) -> np.ndarray:
    """|up down up down ...> = |0101...>."""
    return basis_state([q % 2 for q in range(n)])


def layer_links(n: int, parity: Parity | str, boundary: Boundary | str = Boundary.OPEN) -> list[int]:
    """Left qubit index of every link in a layer of the given parity."""
    parity, boundary = Parity(parity), Boundary(boundary)
    if n < 2:
        raise LayerError("need at least two qubits")
    if boundary is Boundary.PERIODIC and n % 2:
        raise LayerError("periodic brickwork needs an even number of qubits")
    start = 0 if parity is Parity.EVEN else 1
    last = n - 1 if boundary is Boundary.PERIODIC and parity is Parity.ODD else n - 2
    return list(range(start, last + 1, 2))


@dataclass
class BrickworkLayer:
    parity: Parity
    gates: list = field(default_factory=list)  # [(x, 4x4 unitary), ...]

    def __post_init__(self):
        self.parity = Parity(self.parity)

    def validate(self, n: int, boundary: Boundary | str = Boundary.OPEN) -> None:
        allowed = set(layer_links(n, self.parity, boundary))
        touched = set()
        for x, gate in self.gates:
            if x not in allowed:
                raise LayerError(f"link {x} is not a {self.parity.value} link for N={n}")
            pair = {x, (x + 1) % n}
            if touched & pair:
                raise LayerError(f"link {x} overlaps another link in the layer")
            touched |= pair
            if np.shape(gate) != (4, 4):
                raise LayerError("gates must be 4x4")


def random_layer(
    n: int,
    parity: Parity | str,
    rng: np.random.Generator,
    ensemble: GateEnsemble | None = None,
    boundary: Boundary | str = Boundary.OPEN,
) -> BrickworkLayer:
    links = layer_links(n, parity, boundary)
    if ensemble is None or ensemble.kind is EnsembleKind.HAAR_U4:
        gates = list(sample_haar_unitaries(4, len(links), rng))
    else:
        gates = [sample_gate(ensemble, rng) for _ in links]
    return BrickworkLayer(Parity(parity), list(zip(links, gates)))


def apply_two_qubit_gate(psi: np.ndarray, gate: np.ndarray, x: int) -> np.ndarray:
    """Apply a 4x4 gate to qubits (x, x+1 mod N); returns a new vector."""
    n = n_qubits(psi)
    if not 0 <= x < n:
        raise IndexError(f"link {x} out of range for N={n}")
    if x < n - 1:
        view = psi.reshape(1 << x, 4, 1 << (n - x - 2))
        return np.einsum("ab,ibj->iaj", gate, view).reshape(-1)
    # wrap-around link: first gate index is qubit N-1, second is qubit 0
    view = psi.reshape(2, 1 << (n - 2), 2)
    g = gate.reshape(2, 2, 2, 2)
    return np.einsum("abcd,dmc->bma", g, view).reshape(-1)


def apply_layer(psi: np.ndarray, layer: BrickworkLayer) -> np.ndarray:
    for x, gate in layer.gates:
        psi = apply_two_qubit_gate(psi, gate, x)
    return psi


def brickwork_step(psi: np.ndarray, odd_layer: BrickworkLayer, even_layer: BrickworkLayer) -> np.ndarray:
    """U_t = U_odd . U_even: the even layer acts first."""
    if odd_layer.parity is not Parity.ODD or even_layer.parity is not Parity.EVEN:
        raise LayerError("layer parity mismatch")
    return apply_layer(apply_layer(psi, even_layer), odd_layer)


def measure_site(psi: np.ndarray, site: int, rng: np.random.Generator, step: int = 0):
    """Projective Z measurement of one qubit. Returns (post_state, record)."""
    n = n_qubits(psi)
    if not 0 <= site < n:
        raise IndexError(f"site {site} out of range for N={n}")
    view = psi.reshape(1 << site, 2, 1 << (n - site - 1))
    p_plus = float(np.vdot(view[:, 0, :], view[:, 0, :]).real)
    p_plus = min(max(p_plus, 0.0), 1.0)
    p_minus = 1.0 - p_plus
    if p_minus < _OUTCOME_TOL:
        keep = 0
    elif p_plus < _OUTCOME_TOL:
        keep = 1
    else:
        keep = 0 if rng.random() < p_plus else 1
    prob = p_plus if keep == 0 else p_minus
    out = np.zeros_like(view)
    out[:, keep, :] = view[:, keep, :] / np.sqrt(prob)
    return out.reshape(-1), MeasurementRecord(step, site, "+" if keep == 0 else "-", prob)


def measurement_pass(psi: np.ndarray, p: float, rng: np.random.Generator, step: int = 0):
    """Measure each site independently with probability p."""
    n = n_qubits(psi)
    records = []
    for site in np.flatnonzero(rng.random(n) < p):
        psi, rec = measure_site(psi, int(site), rng, step)
        records.append(rec)
    return psi, records


def monitored_step(
    psi: np.ndarray,
    odd_layer: BrickworkLayer,
    even_layer: BrickworkLayer,
    p: float,
    rng: np.random.Generator,
    step: int = 0,
    passes: str = "half_layer",
):
    """One monitored step, M U_odd M U_even by default.

    ``passes="full_step"`` does a single measurement pass after both layers.
    ``rng`` drives only the measurements; gate randomness lives elsewhere,
    so p = 0 reproduces :func:`brickwork_step` exactly.
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"measurement rate must lie in [0, 1], got {p}")
    if odd_layer.parity is not Parity.ODD or even_layer.parity is not Parity.EVEN:
        raise LayerError("layer parity mismatch")
    if passes not in ("half_layer", "full_step"):
        raise InvalidParameterError(f"unknown measurement scheme {passes!r}")
    records = []
    psi = apply_layer(psi, even_layer)
    if passes == "half_layer":
        psi, recs = measurement_pass(psi, p, rng, step)
        records += recs
    psi = apply_layer(psi, odd_layer)
    psi, recs = measurement_pass(psi, p, rng, step)
    records += recs
    return psi, records
