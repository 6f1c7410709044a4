"""Pauli matrices and the multiplication table of the single-qubit Pauli group.

Index convention throughout the package: 0 = identity, 1 = x, 2 = y, 3 = z.
"""

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

# PAULIS[mu] is the mu-th Pauli matrix, mu in {0, 1, 2, 3}.
PAULIS = np.stack([IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z])

# Orthonormal Hermitian basis {1/sqrt(2), sigma_x/sqrt(2), ...} with respect
# to the Hilbert-Schmidt inner product tr(A B).
PAULIS_NORMALIZED = PAULIS / np.sqrt(2.0)

# sigma_a sigma_b = MULT_PHASE[a, b] * sigma_{MULT_IDX[a, b]}
MULT_IDX = np.zeros((4, 4), dtype=np.int64)
MULT_PHASE = np.zeros((4, 4), dtype=complex)
for _a in range(4):
    for _b in range(4):
        _prod = PAULIS[_a] @ PAULIS[_b]
        for _c in range(4):
            _coeff = np.trace(PAULIS[_c].conj().T @ _prod) / 2.0
            if abs(_coeff) > 0.5:
                MULT_IDX[_a, _b] = _c
                MULT_PHASE[_a, _b] = _coeff
                break
del _a, _b, _c, _prod, _coeff


def pauli_string_trace(indices):
    """Trace of a product of Pauli matrices, tr(sigma_{i1} sigma_{i2} ...).

    Always one of {0, +-2, +-2i}; computed from the group multiplication
    table, no matrix products.
    """
    idx = 0
    phase = 1.0 + 0.0j
    for i in indices:
        phase = phase * MULT_PHASE[idx, i]
        idx = MULT_IDX[idx, i]
    return 2.0 * phase if idx == 0 else 0.0j
