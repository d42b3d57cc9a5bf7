"""Tangles, three-tangle, and invariant-subspace diagnostics.

The pairwise tangle is the squared concurrence: with alpha_i the square
roots (descending) of the eigenvalues of rho (sy x sy) rho* (sy x sy),
tau = [max(0, alpha_1 - alpha_2 - alpha_3 - alpha_4)]^2.  Conjugation is
elementwise in the computational basis.  The eigenvalues are obtained
from the Hermitian product L^T (sy x sy) L with rho = L L^dagger: its singular values are the
alpha_i, and zero eigenvalues of rho contribute exact zeros instead of
sqrt-amplified rounding noise.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Optional

import numpy as np

from .collision import Trajectory
from .qstate import DensityOperator, PureState, partial_trace

_SY = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(_SY, _SY)

PERMUTATION_ATOL = 1e-8
PERMUTATION_FAIL = 1e-6


class NumericalConsistencyError(RuntimeError):
    """Raised when permutation cross-checks of the three-tangle disagree."""


class DegenerateSpanError(ValueError):
    """Raised when the two single-qubit states defining a span coincide."""


@dataclass(frozen=True)
class TangleReport:
    """All tangles of one pure three-qubit state."""

    tau_01: float
    tau_02: float
    tau_12: float
    tau_0_rest: float
    tau_1_rest: float
    tau_2_rest: float
    tau_012: float


def _tangle_batch(rhos: np.ndarray) -> np.ndarray:
    """Vectorized tangle for a (m, 4, 4) stack of two-qubit densities."""
    w, v = np.linalg.eigh(rhos)
    w = np.where(w < 0, 0.0, w)
    factor = v * np.sqrt(w)[..., None, :]
    a = np.swapaxes(factor, -1, -2) @ (_YY @ factor)
    alphas = np.linalg.svd(a, compute_uv=False)  # descending
    c = alphas[..., 0] - alphas[..., 1] - alphas[..., 2] - alphas[..., 3]
    return np.maximum(c, 0.0) ** 2


def tangle(rho: DensityOperator) -> float:
    """Squared concurrence of a two-qubit density operator."""
    if rho.n_qubits != 2:
        raise ValueError("tangle requires a two-qubit density operator")
    return float(_tangle_batch(rho.matrix[None])[0])


def _pair_rho_batch(states: np.ndarray, n: int, i: int, j: int) -> np.ndarray:
    """Reduced (m, 4, 4) densities of qubit pair (i, j) from amplitude rows."""
    t = states.reshape((-1,) + (2,) * n)
    t = np.moveaxis(t, (i + 1, j + 1), (1, 2))
    t = np.ascontiguousarray(t).reshape(states.shape[0], 4, -1)
    return np.einsum("mar,mbr->mab", t, t.conj())


def _single_rho_batch(states: np.ndarray, n: int, q: int) -> np.ndarray:
    t = states.reshape((-1,) + (2,) * n)
    t = np.moveaxis(t, q + 1, 1)
    t = np.ascontiguousarray(t).reshape(states.shape[0], 2, -1)
    return np.einsum("mar,mbr->mab", t, t.conj())


def _pure_cut_batch(states: np.ndarray, n: int, q: int) -> np.ndarray:
    """4 det(rho_q) for a batch of pure-state amplitude rows."""
    r = _single_rho_batch(states, n, q)
    det = (r[:, 0, 0] * r[:, 1, 1] - r[:, 0, 1] * r[:, 1, 0]).real
    return np.clip(4.0 * det, 0.0, 1.0)


def tangle_pure_cut(full: PureState, qubit: int) -> float:
    """Tangle between one qubit and the rest of a pure state: 4 det(rho_q)."""
    if not 0 <= qubit < full.n_qubits:
        raise ValueError(f"qubit {qubit} out of range")
    return float(_pure_cut_batch(full.amplitudes[None], full.n_qubits, qubit)[0])


def _report_arrays(states: np.ndarray) -> dict:
    """All tangle series for a (m, 8) batch of pure three-qubit states."""
    out = {}
    pairs = {(0, 1): "tau_01", (0, 2): "tau_02", (1, 2): "tau_12"}
    for (i, j), name in pairs.items():
        out[name] = _tangle_batch(_pair_rho_batch(states, 3, i, j))
    for q in range(3):
        out[f"tau_{q}_rest"] = _pure_cut_batch(states, 3, q)
    roots = [
        out["tau_0_rest"] - out["tau_01"] - out["tau_02"],
        out["tau_1_rest"] - out["tau_01"] - out["tau_12"],
        out["tau_2_rest"] - out["tau_02"] - out["tau_12"],
    ]
    spread = np.max(
        [np.abs(roots[0] - roots[1]), np.abs(roots[0] - roots[2])], axis=0
    )
    worst = float(spread.max()) if spread.size else 0.0
    if worst > PERMUTATION_FAIL:
        raise NumericalConsistencyError(
            f"three-tangle roots disagree by {worst:.3e}"
        )
    tau012 = roots[0]
    tau012 = np.where((tau012 < 0) & (tau012 > -1e-9), 0.0, tau012)
    out["tau_012"] = tau012
    out["root_spread"] = spread
    return out


def three_tangle(full: PureState) -> float:
    """Genuine tripartite entanglement tau_{0|12} - tau_{0|1} - tau_{0|2}."""
    if full.n_qubits != 3:
        raise ValueError("three_tangle requires a three-qubit pure state")
    return float(_report_arrays(full.amplitudes[None])["tau_012"][0])


def tangle_report(full: PureState) -> TangleReport:
    """Every pairwise, one-vs-rest, and tripartite tangle of a 3-qubit state."""
    if full.n_qubits != 3:
        raise ValueError("tangle_report requires a three-qubit pure state")
    arrs = _report_arrays(full.amplitudes[None])
    return TangleReport(
        **{k: float(v[0]) for k, v in arrs.items() if k != "root_spread"}
    )


def tangle_series(traj: Trajectory) -> dict:
    """Per-step tangle arrays for a pure three-qubit trajectory."""
    if not traj.pure:
        raise ValueError("tangle_series requires a pure-state trajectory")
    if traj.initial.n_qubits != 3:
        raise ValueError("tangle_series requires three qubits")
    chunks = []
    for block in traj.amplitude_chunks():
        arrs = _report_arrays(block)
        arrs.pop("root_spread")
        chunks.append(arrs)
    return {k: np.concatenate([c[k] for c in chunks]) for k in chunks[0]}


def time_averaged_tangles(traj: Trajectory) -> dict:
    """Running time averages of the tangle series (Fig.-4 style curves).

    Returns the instantaneous series plus ``avg_``-prefixed running means.
    For density-matrix trajectories the pairwise tangles are still
    computed but the purity-only quantities are reported as None.
    """
    if traj.pure:
        series = tangle_series(traj)
    else:
        series = _mixed_pairwise_series(traj)
    counts = np.arange(1, traj.length + 2, dtype=float)
    out = dict(series)
    for k, v in series.items():
        out["avg_" + k] = None if v is None else np.cumsum(v) / counts
    return out


def _mixed_pairwise_series(traj: Trajectory) -> dict:
    pairs = {(0, 1): "tau_01", (0, 2): "tau_02", (1, 2): "tau_12"}
    vals = {name: [] for name in pairs.values()}
    for _, rho in traj:
        for (i, j), name in pairs.items():
            vals[name].append(tangle(partial_trace(rho, [i, j])))
    out = {name: np.asarray(v) for name, v in vals.items()}
    for q in range(3):
        out[f"tau_{q}_rest"] = None
    out["tau_012"] = None
    return out


def _product_vector(singles) -> np.ndarray:
    return reduce(np.kron, [s.amplitudes for s in singles])


def w_span_residual(state: PureState, psi: PureState, phi: PureState) -> float:
    """Distance of a state from the span of single-psi-insertion products.

    The span contains the all-phi product vector and, for each qubit
    position, the product with psi at that position and phi elsewhere
    (dimension n+1).  Trajectories started inside this span stay in it.
    """
    if psi.n_qubits != 1 or phi.n_qubits != 1:
        raise ValueError("psi and phi must be single-qubit states")
    n = state.n_qubits
    if n < 3:
        raise ValueError("need at least three qubits")
    overlap = abs(np.vdot(psi.amplitudes, phi.amplitudes))
    if overlap > 1.0 - 1e-8:
        raise DegenerateSpanError("psi and phi are (nearly) parallel")
    basis = [_product_vector([phi] * n)]
    for pos in range(n):
        singles = [phi] * n
        singles[pos] = psi
        basis.append(_product_vector(singles))
    q, _ = np.linalg.qr(np.stack(basis, axis=1))
    amp = state.amplitudes
    remainder = amp - q @ (q.conj().T @ amp)
    return float(min(1.0, np.linalg.norm(remainder)))


def ghz_span_residual(state: PureState) -> float:
    """Norm of the state component outside span{|000>, |111>}."""
    if state.n_qubits != 3:
        raise ValueError("ghz_span_residual requires three qubits")
    outside = np.delete(state.amplitudes, [0, 7])
    return float(min(1.0, np.linalg.norm(outside)))
