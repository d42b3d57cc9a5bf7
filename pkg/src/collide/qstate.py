"""Dense linear algebra for multi-qubit pure states and density operators.

Qubit 0 is the system qubit and occupies the most significant bit of the
basis index; qubits 1..N are the environment.  All values are immutable
after construction and every operation is a pure function.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ATOL = 1e-10
MAX_DIM = 2**20


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over ``n_qubits`` qubits (length 2^n)."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes, got {amps.shape}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > ATOL:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm2}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite 2^n x 2^n matrix."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        dim = 2**self.n_qubits
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if mat.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {mat.shape}")
        herm_err = np.max(np.abs(mat - mat.conj().T))
        if herm_err > ATOL:
            raise ValueError(f"matrix is not Hermitian (error {herm_err})")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"trace is {tr}, expected 1")
        if np.min(np.linalg.eigvalsh(mat)) < -ATOL:
            raise ValueError("matrix has a negative eigenvalue")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector (Tr rho sx, Tr rho sy, Tr rho sz) of a single qubit."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.x**2 + self.y**2 + self.z**2 > 1.0 + ATOL:
            raise ValueError("Bloch vector lies outside the unit ball")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def single_qubit_from_angles(theta: float, phi: float = 0.0) -> PureState:
    """State cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    amps = np.array(
        [np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)],
        dtype=np.complex128,
    )
    return PureState(1, amps)


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product; ``a``'s qubits occupy the more significant bits."""
    n = a.n_qubits + b.n_qubits
    if 2**n > MAX_DIM:
        raise OverflowError(f"tensor product dimension 2^{n} exceeds {MAX_DIM}")
    return PureState(n, np.kron(a.amplitudes, b.amplitudes))


def tensor_all(states: Iterable[PureState]) -> PureState:
    states = list(states)
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def bell_pair() -> PureState:
    """The Bell state (|00> + |11>)/sqrt(2)."""
    return PureState(2, np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2))


def to_density(s: PureState) -> DensityOperator:
    """Outer product |s><s|."""
    return DensityOperator(s.n_qubits, np.outer(s.amplitudes, s.amplitudes.conj()))


def partial_trace(rho: DensityOperator, keep: Sequence[int]) -> DensityOperator:
    """Reduced density operator on the kept qubits, in the given order."""
    keep = list(keep)
    n = rho.n_qubits
    if not keep:
        raise ValueError("keep must be nonempty")
    if len(set(keep)) != len(keep):
        raise ValueError("keep indices must be distinct")
    for q in keep:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")

    t = rho.matrix.reshape((2,) * (2 * n))
    # Row axis of qubit q is q; column axis is n + q.  Contracting a traced
    # qubit means giving its row and column axes the same einsum label.
    row = list(range(n))
    col = [n + q for q in range(n)]
    for q in range(n):
        if q not in keep:
            col[q] = row[q]
    out = [row[q] for q in keep] + [col[q] for q in keep]
    reduced = np.einsum(t, row + col, out)
    k = len(keep)
    return DensityOperator(k, reduced.reshape(2**k, 2**k))


def bloch_vector(rho: DensityOperator) -> BlochVector:
    """Bloch vector of a single-qubit density operator."""
    if rho.n_qubits != 1:
        raise ValueError("bloch_vector requires a single-qubit density operator")
    m = rho.matrix
    return BlochVector(
        x=float(2.0 * m[0, 1].real),
        y=float(-2.0 * m[0, 1].imag),
        z=float((m[0, 0] - m[1, 1]).real),
    )
