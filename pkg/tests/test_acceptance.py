"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a single ``[ACCEPT] name: PASS`` line on success (visible
with ``pytest -s`` or in the captured output of failures).
"""

import numpy as np
import pytest

from collide import (
    CollisionParams,
    PureState,
    bell_pair,
    bloch_series_multi,
    evolve,
    exp_decay_fit,
    ghz_span_residual,
    loglog_slope,
    oscillation_persistence,
    partial_swap_pair,
    partial_trace,
    self_correlation,
    sequence_periodic,
    sequence_random,
    single_qubit_from_angles,
    tangle,
    tangle_pure_cut,
    tangle_report,
    tangle_series,
    tensor,
    tensor_all,
    three_tangle,
    time_averaged_tangles,
    to_density,
    total_bloch,
    w_span_residual,
)
from collide.observables import averaged_deviation
from conftest import random_pure_state

ETA = np.pi / 10
THETA = 2 * np.pi / 5
KET0 = PureState(1, np.array([1.0, 0.0]))
W_STATE = PureState(3, np.array([0, 1, 1, 0, 1, 0, 0, 0]) / np.sqrt(3))
GHZ_STATE = PureState(3, np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2))


def report(name):
    print(f"[ACCEPT] {name}: PASS")


def paper_initial(env="zeros"):
    system = single_qubit_from_angles(THETA)
    if env == "bell":
        return tensor(system, bell_pair())
    return tensor_all([system, KET0, KET0])


def final_state(traj):
    for block in traj.amplitude_chunks():
        last = block[-1]
    return last


def test_conservation_random_configs():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        n_env = int(rng.integers(2, 5))
        theta = rng.uniform(0, np.pi)
        phi = rng.uniform(0, 2 * np.pi)
        eta = rng.uniform(0.05, np.pi / 2)
        init = tensor_all(
            [single_qubit_from_angles(theta, phi)]
            + [
                single_qubit_from_angles(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
                for _ in range(n_env)
            ]
        )
        seq = sequence_random(10**5, n_env, int(rng.integers(0, 2**63)))
        traj = evolve(init, CollisionParams(eta, n_env), seq)
        last = PureState(n_env + 1, final_state(traj))
        drift = np.abs(total_bloch(last) - total_bloch(init))
        assert np.max(drift) < 1e-9, f"total Bloch drift {drift}"
    report("conservation: 20 random configs, 1e5 collisions, drift < 1e-9")


def test_unitarity_and_norm_drift():
    rng = np.random.default_rng(11)
    for eta in rng.uniform(-np.pi, np.pi, size=50):
        u = partial_swap_pair(eta)
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12
    traj = evolve(
        paper_initial(), CollisionParams(ETA, 2), sequence_random(10**6, 2, 55)
    )
    norm = np.linalg.norm(final_state(traj))
    assert abs(norm - 1.0) < 1e-8, f"norm drift {abs(norm - 1.0)}"
    report("unitarity < 1e-12 and norm drift after 1e6 collisions < 1e-8")


def test_one_step_oracle():
    from collide import apply_collision, state_bloch

    out = apply_collision(paper_initial(), 1, ETA)
    b0z = state_bloch(out, 0)[2]
    assert abs(b0z - 0.375) < 1e-12
    report("one-step oracle b0z(1) = 0.375 within 1e-12")


def test_diffusive_averaging_slope():
    # ensemble mean of |<db_z>|(t) over 20 seeds, then one log-log fit
    ts = np.unique(np.round(np.logspace(3, 6, 150)).astype(int))
    acc = np.zeros((3, len(ts)))
    n_seeds = 20
    for seed in range(n_seeds):
        traj = evolve(
            paper_initial(), CollisionParams(ETA, 2), sequence_random(10**6, 2, seed)
        )
        for q, s in enumerate(bloch_series_multi(traj, [0, 1, 2])):
            acc[q] += np.abs(averaged_deviation(s).dz[ts])
    acc /= n_seeds
    for q in range(3):
        slope = loglog_slope(ts, acc[q], (1e3, 1e6))
        assert -0.6 <= slope <= -0.4, f"qubit {q} slope {slope}"
    report("diffusive averaging: all three slopes in [-0.6, -0.4]")


def _envelope_peaks(values):
    """(lags, values) of the local maxima of |values|."""
    a = np.abs(values)
    idx = np.flatnonzero((a[1:-1] >= a[:-2]) & (a[1:-1] >= a[2:])) + 1
    return idx, a[idx]


def _plateau(values, t_max):
    return float(np.median(np.abs(values[t_max // 2 :])))


def test_regime_separation():
    T, t_max = 10**6, 2000
    params = CollisionParams(ETA, 2)
    s_rand = bloch_series_multi(
        evolve(paper_initial(), params, sequence_random(T + t_max, 2, 101)), [0]
    )[0]
    c_rand = self_correlation(s_rand, T, t_max).cz
    plateau_1e6 = _plateau(c_rand, t_max)
    plateau_1e4 = _plateau(self_correlation(s_rand, 10**4, t_max).cz, t_max)

    # plateau level shrinks roughly as T^{-1/2}: ideal factor 10
    ratio = plateau_1e4 / plateau_1e6
    assert 3.0 <= ratio <= 30.0, f"plateau ratio {ratio}"

    # exponential decay of the oscillation envelope before the plateau
    lags, peaks = _envelope_peaks(c_rand)
    below = np.flatnonzero(peaks < 3.0 * plateau_1e6)
    cut = below[0] if below.size else len(peaks)
    assert cut >= 5, "no resolvable pre-plateau window"
    _, r2 = exp_decay_fit(lags[:cut], peaks[:cut], (lags[0], lags[cut - 1]))
    assert r2 > 0.9, f"envelope fit r^2 {r2}"

    # the periodic sequence keeps oscillating instead of decaying
    s_per = bloch_series_multi(
        evolve(paper_initial(), params, sequence_periodic(T + t_max, 2)), [0]
    )[0]
    c_per = self_correlation(s_per, T, t_max).cz
    persistence = oscillation_persistence(c_per, 1000)
    assert persistence > 10.0 * plateau_1e6, (
        f"persistence {persistence} vs plateau {plateau_1e6}"
    )
    report(
        "regime separation: periodic persistence > 10x plateau, "
        "r^2 > 0.9, plateau ratio in [3, 30]"
    )


def test_tangle_oracles():
    assert abs(tangle(to_density(bell_pair())) - 1.0) < 1e-10
    for pair in ([0, 1], [0, 2], [1, 2]):
        red = partial_trace(to_density(W_STATE), pair)
        assert abs(tangle(red) - 4.0 / 9.0) < 1e-9
    for q in range(3):
        assert abs(tangle_pure_cut(W_STATE, q) - 8.0 / 9.0) < 1e-9
    assert abs(three_tangle(GHZ_STATE) - 1.0) < 1e-9
    rng = np.random.default_rng(31)
    for _ in range(200):
        r = tangle_report(random_pure_state(rng, 3))
        roots = [
            r.tau_0_rest - r.tau_01 - r.tau_02,
            r.tau_1_rest - r.tau_01 - r.tau_12,
            r.tau_2_rest - r.tau_02 - r.tau_12,
        ]
        assert max(roots) - min(roots) < 1e-8
        assert r.tau_0_rest - r.tau_01 - r.tau_02 >= -1e-9
        assert r.tau_1_rest - r.tau_01 - r.tau_12 >= -1e-9
        assert r.tau_2_rest - r.tau_02 - r.tau_12 >= -1e-9
    report("tangle oracles: Bell/W/GHZ values, permutation + monogamy on 200 states")


@pytest.mark.parametrize("regime", ["random", "periodic"])
def test_w_class_closure(regime):
    psi = single_qubit_from_angles(THETA)
    if regime == "random":
        seq = sequence_random(10**4, 2, 303)
    else:
        seq = sequence_periodic(10**4, 2)
    traj = evolve(paper_initial(), CollisionParams(ETA, 2), seq)
    tau012 = tangle_series(traj)["tau_012"]
    assert np.max(np.abs(tau012)) < 1e-8
    worst = 0.0
    for t, state in evolve(paper_initial(), CollisionParams(ETA, 2), seq):
        worst = max(worst, w_span_residual(state, psi, KET0))
    assert worst < 1e-9, f"w-span residual {worst}"
    report(f"W-class closure ({regime}): residual < 1e-9, three-tangle < 1e-8")


def test_ghz_family_closure():
    seq = sequence_random(10**4, 2, 404)
    traj = evolve(GHZ_STATE, CollisionParams(ETA, 2), seq)
    series = tangle_series(traj)
    for key in ("tau_01", "tau_02", "tau_12"):
        assert np.max(series[key]) < 1e-8
    worst = 0.0
    for _, state in evolve(GHZ_STATE, CollisionParams(ETA, 2), seq):
        worst = max(worst, ghz_span_residual(state))
    assert worst < 1e-9, f"GHZ-span residual {worst}"
    report("GHZ-family closure: residual < 1e-9, pairwise tangles < 1e-8")


def test_fig4_saturation():
    params = CollisionParams(ETA, 2)

    avg = time_averaged_tangles(
        evolve(paper_initial(), params, sequence_random(10**6, 2, 42))
    )
    pairwise = [avg[f"avg_tau_{p}"][-1] for p in ("01", "02", "12")]
    assert max(pairwise) - min(pairwise) < 0.01
    assert avg["avg_tau_012"][-1] < 1e-6

    avg_bell = time_averaged_tangles(
        evolve(paper_initial("bell"), params, sequence_random(10**6, 2, 42))
    )
    assert avg_bell["avg_tau_012"][-1] > 0.01
    report(
        "Fig.-4 saturation: common pairwise limit (spread < 0.01), "
        "three-tangle 0 for |00> env and > 0.01 for Bell env"
    )


def test_csv_determinism(tmp_path):
    from collide.cli import RunConfig, run

    files = []
    for tag in ("a", "b"):
        cfg = RunConfig(
            eta=ETA, theta=THETA, seed=99, steps=1000,
            record=["bloch", "tangles"], out=str(tmp_path / tag),
        )
        files.append(run(cfg))
    for family in ("bloch", "tangles"):
        assert files[0][family].read_bytes() == files[1][family].read_bytes()
    report("determinism: identical config + seed gives byte-identical CSV bodies")
