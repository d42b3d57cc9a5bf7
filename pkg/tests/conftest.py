"""Shared helpers: independent brute-force oracles and random-state factories.

The oracles here deliberately take different computational routes from the
library (explicit basis-index loops, full matrices, non-Hermitian
eigensolver) so that agreement is meaningful.
"""

import numpy as np
import pytest

from collide import PureState


def random_pure_state(rng, n_qubits):
    amps = rng.standard_normal(2**n_qubits) + 1j * rng.standard_normal(2**n_qubits)
    return PureState(n_qubits, amps / np.linalg.norm(amps))


def random_single_qubit_unitary(rng):
    m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def brute_partial_trace(mat, n, keep):
    """Partial trace by explicit summation over basis bit-strings."""
    traced = [q for q in range(n) if q not in keep]
    k = len(keep)
    out = np.zeros((2**k, 2**k), dtype=complex)

    def full_index(kept_bits, traced_bits):
        bits = [0] * n
        for q, b in zip(keep, kept_bits):
            bits[q] = b
        for q, b in zip(traced, traced_bits):
            bits[q] = b
        idx = 0
        for b in bits:
            idx = (idx << 1) | b
        return idx

    for r in range(2**k):
        rbits = [(r >> (k - 1 - i)) & 1 for i in range(k)]
        for c in range(2**k):
            cbits = [(c >> (k - 1 - i)) & 1 for i in range(k)]
            for tr in range(2 ** len(traced)):
                tbits = [(tr >> (len(traced) - 1 - i)) & 1 for i in range(len(traced))]
                out[r, c] += mat[full_index(rbits, tbits), full_index(cbits, tbits)]
    return out


def full_swap_matrix(n, q0, q1):
    """Permutation matrix swapping the bits of qubits q0 and q1."""
    dim = 2**n
    mat = np.zeros((dim, dim))
    for k in range(dim):
        b0 = (k >> (n - 1 - q0)) & 1
        b1 = (k >> (n - 1 - q1)) & 1
        j = k
        if b0 != b1:
            j ^= (1 << (n - 1 - q0)) | (1 << (n - 1 - q1))
        mat[j, k] = 1.0
    return mat


def full_collision_unitary(n, env_index, eta):
    """Full 2^n x 2^n partial-swap unitary on qubits (0, env_index)."""
    return np.cos(eta) * np.eye(2**n) + 1j * np.sin(eta) * full_swap_matrix(
        n, 0, env_index
    )


def concurrence_oracle(rho):
    """Tangle via the non-Hermitian spectrum of rho (sy x sy) rho* (sy x sy)."""
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    evals = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    alphas = np.sqrt(np.abs(np.sort(evals.real)[::-1]))
    return max(0.0, alphas[0] - alphas[1] - alphas[2] - alphas[3]) ** 2


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
