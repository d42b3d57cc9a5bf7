"""Partial-swap collisions: unitaries, collision sequences, evolution.

Each collision applies U = cos(eta) I + i sin(eta) SWAP to the pair
(system qubit 0, one environment qubit).  Evolution is lazy: a
:class:`Trajectory` yields the state after 0, 1, ..., t_max collisions.
"""

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .qstate import DensityOperator, PureState

PRNG_ALGORITHM = "numpy-pcg64"

# Below this dimension each environment qubit's full collision unitary is
# precomputed once, making a step a single dense matvec.
_DENSE_DIM = 64

_SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]],
    dtype=np.complex128,
)


@dataclass(frozen=True)
class CollisionParams:
    """Coupling strength eta (radians) and environment size n_env."""

    eta: float
    n_env: int

    def __post_init__(self):
        if self.n_env < 1:
            raise ValueError("n_env must be >= 1")


@dataclass(frozen=True)
class CollisionSequence:
    """Order of environment qubits hit at each step (1-based indices)."""

    kind: str  # "random" | "periodic" | "explicit"
    indices: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        idx = np.ascontiguousarray(self.indices, dtype=np.int64)
        if idx.ndim != 1:
            raise ValueError("indices must be a flat list")
        if idx.size and idx.min() < 1:
            raise ValueError("environment indices are 1-based")
        if self.kind not in ("random", "periodic", "explicit"):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if (self.seed is not None) != (self.kind == "random"):
            raise ValueError("seed must be present iff kind is 'random'")
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)

    @property
    def length(self) -> int:
        return int(self.indices.size)


def partial_swap_pair(eta: float) -> np.ndarray:
    """4x4 unitary cos(eta) I + i sin(eta) SWAP on an ordered qubit pair."""
    return np.cos(eta) * np.eye(4, dtype=np.complex128) + 1j * np.sin(eta) * _SWAP


def _apply_pair(amps: np.ndarray, n: int, q0: int, q1: int, u4: np.ndarray) -> np.ndarray:
    """Apply a 4x4 unitary to qubits (q0, q1) of an n-qubit amplitude vector."""
    t = amps.reshape((2,) * n)
    t = np.moveaxis(t, (q0, q1), (0, 1))
    shape = t.shape
    t = (u4 @ t.reshape(4, -1)).reshape((2, 2) + shape[2:])
    t = np.moveaxis(t, (0, 1), (q0, q1))
    return np.ascontiguousarray(t).reshape(-1)


def apply_collision(state: PureState, env_index: int, eta: float) -> PureState:
    """One collision between the system qubit and environment qubit env_index."""
    n = state.n_qubits
    if not 1 <= env_index <= n - 1:
        raise ValueError(f"env_index {env_index} out of range 1..{n - 1}")
    amps = _apply_pair(state.amplitudes, n, 0, env_index, partial_swap_pair(eta))
    return PureState(n, amps)


def sequence_random(length: int, n_env: int, seed: int) -> CollisionSequence:
    """I.i.d. uniform draws from {1..n_env}; deterministic in the seed."""
    if length < 0:
        raise ValueError("length must be >= 0")
    if n_env < 1:
        raise ValueError("n_env must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = rng.integers(1, n_env + 1, size=length, dtype=np.int64)
    return CollisionSequence("random", idx, seed=int(seed))


def sequence_periodic(length: int, n_env: int) -> CollisionSequence:
    """The regular sequence 1, 2, ..., n_env, 1, 2, ..."""
    if length < 0:
        raise ValueError("length must be >= 0")
    idx = (np.arange(length, dtype=np.int64) % n_env) + 1
    return CollisionSequence("periodic", idx)


def sequence_explicit(indices: Sequence[int]) -> CollisionSequence:
    return CollisionSequence("explicit", np.asarray(indices, dtype=np.int64))


class Trajectory:
    """Lazy step iterator over a collision run.

    Iterating yields ``(t, state)`` for t = 0..length, where step 0 is the
    initial state and each later step applies exactly one collision.
    A trajectory is single-consumer per iterator; distinct iterators and
    distinct trajectories are independent.
    """

    def __init__(self, initial, params: CollisionParams, seq: CollisionSequence):
        expected = params.n_env + 1
        if initial.n_qubits != expected:
            raise ValueError(
                f"state has {initial.n_qubits} qubits, expected {expected}"
            )
        if seq.length and int(seq.indices.max()) > params.n_env:
            raise ValueError("sequence index exceeds n_env")
        self.initial = initial
        self.params = params
        self.seq = seq
        self.pure = isinstance(initial, PureState)

    @property
    def length(self) -> int:
        return self.seq.length

    def _unitaries(self):
        """Per-environment-qubit collision unitaries, dense when small."""
        n = self.initial.n_qubits
        dim = 2**n
        u4 = partial_swap_pair(self.params.eta)
        if dim <= _DENSE_DIM:
            eye = np.eye(dim, dtype=np.complex128)
            return {
                j: np.stack(
                    [_apply_pair(eye[:, k], n, 0, j, u4) for k in range(dim)], axis=1
                )
                for j in range(1, self.params.n_env + 1)
            }
        return None

    def amplitude_chunks(self, chunk_size: int = 8192) -> Iterator[np.ndarray]:
        """Yield consecutive blocks of raw amplitude rows for steps 0..length.

        Fast path for observable extraction; rows concatenated over all
        yielded blocks are the states at t = 0, 1, ..., length.
        """
        if not self.pure:
            raise TypeError("amplitude_chunks requires a pure-state trajectory")
        n = self.initial.n_qubits
        dim = 2**n
        dense = self._unitaries()
        u4 = partial_swap_pair(self.params.eta)
        psi = np.array(self.initial.amplitudes)
        idx = self.seq.indices
        total = self.seq.length + 1
        buf = np.empty((min(chunk_size, total), dim), dtype=np.complex128)
        buf[0] = psi
        fill = 1
        for t in range(self.seq.length):
            j = int(idx[t])
            if dense is not None:
                psi = dense[j] @ psi
            else:
                psi = _apply_pair(psi, n, 0, j, u4)
            if fill == buf.shape[0]:
                yield buf
                buf = np.empty((min(chunk_size, total - (t + 1)), dim), np.complex128)
                fill = 0
            buf[fill] = psi
            fill += 1
        yield buf[:fill]

    def __iter__(self):
        if self.pure:
            t = 0
            for block in self.amplitude_chunks():
                for row in block:
                    yield t, PureState(self.initial.n_qubits, row)
                    t += 1
        else:
            yield from self._iter_density()

    def _iter_density(self):
        n = self.initial.n_qubits
        dense = self._unitaries()
        u4 = partial_swap_pair(self.params.eta)
        rho = np.array(self.initial.matrix)
        yield 0, self.initial
        for t in range(self.seq.length):
            j = int(self.seq.indices[t])
            if dense is not None:
                u = dense[j]
                rho = u @ rho @ u.conj().T
            else:
                rho = np.stack(
                    [_apply_pair(col, n, 0, j, u4) for col in rho.T], axis=1
                )
                rho = np.stack(
                    [_apply_pair(col.conj(), n, 0, j, u4).conj() for col in rho],
                    axis=0,
                )
            yield t + 1, DensityOperator(n, rho)


def evolve(initial: PureState, params: CollisionParams, seq: CollisionSequence) -> Trajectory:
    """State-vector evolution U_{i_t} ... U_{i_1} |initial>."""
    return Trajectory(initial, params, seq)


def evolve_density(
    initial: DensityOperator, params: CollisionParams, seq: CollisionSequence
) -> Trajectory:
    """Density-matrix evolution U ... rho ... U^dagger."""
    return Trajectory(initial, params, seq)
