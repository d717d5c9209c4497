"""Independent dense reference implementations shared by the test modules."""

import numpy as np


def dense_gate(gate, x, n):
    """Full 2^n operator for a gate on qubits (x, x+1 mod n), built column by column."""
    q0, q1 = x, (x + 1) % n
    d = 1 << n
    full = np.zeros((d, d), dtype=complex)
    for col in range(d):
        b0 = (col >> (n - 1 - q0)) & 1
        b1 = (col >> (n - 1 - q1)) & 1
        rest = col & ~(1 << (n - 1 - q0)) & ~(1 << (n - 1 - q1))
        for out in range(4):
            o0, o1 = out >> 1, out & 1
            row = rest | (o0 << (n - 1 - q0)) | (o1 << (n - 1 - q1))
            full[row, col] += gate[out, 2 * b0 + b1]
    return full


def dense_projector(site, outcome, n):
    bits = (np.arange(1 << n) >> (n - 1 - site)) & 1
    return np.diag((bits == outcome).astype(complex))
