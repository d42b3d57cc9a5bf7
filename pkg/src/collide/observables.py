"""Bloch-vector time series, running averages, self-correlations, fits."""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .collision import Trajectory
from .qstate import PureState, bloch_vector, partial_trace, to_density


@dataclass(frozen=True)
class BlochSeries:
    """Per-step Bloch components of one qubit plus the equilibrium reference.

    ``reference`` is the conserved total Bloch vector divided by the number
    of qubits: the common value every marginal approaches in time average.
    """

    qubit: int
    bx: np.ndarray
    by: np.ndarray
    bz: np.ndarray
    reference: np.ndarray  # shape (3,)

    def component(self, k: str) -> np.ndarray:
        return {"x": self.bx, "y": self.by, "z": self.bz}[k]

    def __len__(self) -> int:
        return len(self.bz)


@dataclass(frozen=True)
class AveragedDeviation:
    """Running time average of b(t') - reference over t' = 0..t."""

    qubit: int
    dx: np.ndarray
    dy: np.ndarray
    dz: np.ndarray

    def component(self, k: str) -> np.ndarray:
        return {"x": self.dx, "y": self.dy, "z": self.dz}[k]


@dataclass(frozen=True)
class CorrelationFunction:
    """Finite-sample self-correlation C_k(t) for lags 0..t_max."""

    qubit: int
    samples: int  # the T of the estimator
    cx: np.ndarray
    cy: np.ndarray
    cz: np.ndarray

    def component(self, k: str) -> np.ndarray:
        return {"x": self.cx, "y": self.cy, "z": self.cz}[k]


def _bit_indices(n: int, qubit: int) -> Tuple[np.ndarray, np.ndarray]:
    """Basis indices with the qubit in |0>, and their |1> partners."""
    step = 1 << (n - 1 - qubit)
    all_idx = np.arange(2**n)
    idx0 = all_idx[(all_idx // step) % 2 == 0]
    return idx0, idx0 + step


def _bloch_block(block: np.ndarray, n: int, qubit: int):
    """Vectorized (bx, by, bz) for a block of amplitude rows."""
    idx0, idx1 = _bit_indices(n, qubit)
    a0 = block[:, idx0]
    a1 = block[:, idx1]
    cross = np.einsum("mj,mj->m", a0, a1.conj())
    p0 = np.einsum("mj,mj->m", a0, a0.conj()).real
    p1 = np.einsum("mj,mj->m", a1, a1.conj()).real
    return 2.0 * cross.real, -2.0 * cross.imag, p0 - p1


def state_bloch(state: PureState, qubit: int) -> np.ndarray:
    """Bloch vector of one qubit of a pure state, as an array."""
    b = bloch_vector(partial_trace(to_density(state), [qubit]))
    return b.as_array()


def total_bloch(state: PureState) -> np.ndarray:
    """Sum of all single-qubit Bloch vectors (a constant of motion)."""
    return sum(state_bloch(state, q) for q in range(state.n_qubits))


def bloch_series_multi(traj: Trajectory, qubits: Sequence[int]) -> list[BlochSeries]:
    """Bloch series for several qubits in a single pass over the trajectory."""
    n = traj.initial.n_qubits
    for q in qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} out of range")
    ref = total_bloch(traj.initial) / n
    parts = {q: ([], [], []) for q in qubits}
    for block in traj.amplitude_chunks():
        for q in qubits:
            x, y, z = _bloch_block(block, n, q)
            parts[q][0].append(x)
            parts[q][1].append(y)
            parts[q][2].append(z)
    return [
        BlochSeries(
            qubit=q,
            bx=np.concatenate(parts[q][0]),
            by=np.concatenate(parts[q][1]),
            bz=np.concatenate(parts[q][2]),
            reference=ref,
        )
        for q in qubits
    ]


def bloch_series(traj: Trajectory, qubit: int) -> BlochSeries:
    """Per-step Bloch vector of one qubit along a trajectory."""
    return bloch_series_multi(traj, [qubit])[0]


def averaged_deviation(series: BlochSeries) -> AveragedDeviation:
    """Running mean of the deviation from the equilibrium reference."""
    if len(series) == 0:
        raise ValueError("series is empty")
    counts = np.arange(1, len(series) + 1, dtype=float)
    out = []
    for k, ref in zip("xyz", series.reference):
        out.append(np.cumsum(series.component(k) - ref) / counts)
    return AveragedDeviation(series.qubit, *out)


def self_correlation(series: BlochSeries, T: int, t_max: int) -> CorrelationFunction:
    """Finite-T estimator C_k(t) = mean over t'<=T of db(t') db(t'+t).

    The underlying series must cover steps 0..T+t_max; no circular
    wrap-around is used.
    """
    if T < 0 or t_max < 0:
        raise ValueError("T and t_max must be nonnegative")
    if len(series) < T + t_max + 1:
        raise ValueError(
            f"series has {len(series)} steps, need at least {T + t_max + 1}"
        )
    out = []
    for k, ref in zip("xyz", series.reference):
        d = series.component(k) - ref
        c = np.empty(t_max + 1)
        head = d[: T + 1]
        for lag in range(t_max + 1):
            c[lag] = np.dot(head, d[lag : lag + T + 1]) / (T + 1)
        out.append(c)
    return CorrelationFunction(series.qubit, T, *out)


def loglog_slope(xs, ys, window: Tuple[float, float]) -> float:
    """Least-squares slope of log ys vs log xs restricted to a window."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    lo, hi = window
    mask = (xs >= lo) & (xs <= hi)
    if np.any(xs[mask] <= 0) or np.any(ys[mask] <= 0):
        raise ValueError("log-log fit requires positive values in the window")
    if mask.sum() < 10:
        raise ValueError("need at least 10 points in the fit window")
    slope, _ = np.polyfit(np.log(xs[mask]), np.log(ys[mask]), 1)
    return float(slope)


def exp_decay_fit(lags, values, window: Tuple[float, float]) -> Tuple[float, float]:
    """Fit values ~ A exp(-rate * lag) in the window; returns (rate, r^2)."""
    lags = np.asarray(lags, dtype=float)
    values = np.asarray(values, dtype=float)
    lo, hi = window
    mask = (lags >= lo) & (lags <= hi)
    if np.any(values[mask] <= 0):
        raise ValueError("exponential fit requires positive values in the window")
    if mask.sum() < 2:
        raise ValueError("need at least 2 points in the fit window")
    x = lags[mask]
    y = np.log(values[mask])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(-slope), r2


def oscillation_persistence(values, t_min: int) -> float:
    """Maximum |value| at indices >= t_min; detects non-decaying signals."""
    values = np.asarray(values, dtype=float)
    if not 0 <= t_min < len(values):
        raise ValueError("t_min out of range")
    return float(np.max(np.abs(values[t_min:])))
