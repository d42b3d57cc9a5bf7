"""Experiment runner: config handling, seeded runs, CSV/JSON export, recipes.

Subcommands: ``collide run``, ``collide correlate``, ``collide sweep``,
``collide recipe <name>``.  Output files share a path prefix: for prefix
``out`` the runner writes ``out_bloch.csv``, ``out_tangles.csv``, ...,
plus ``out_metadata.json``.
"""

import argparse
import dataclasses
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .collision import (
    PRNG_ALGORITHM,
    CollisionParams,
    CollisionSequence,
    Trajectory,
    evolve,
    sequence_explicit,
    sequence_periodic,
    sequence_random,
)
from .entanglement import ghz_span_residual, time_averaged_tangles, w_span_residual
from .observables import (
    averaged_deviation,
    bloch_series_multi,
    loglog_slope,
    self_correlation,
)
from .qstate import PureState, bell_pair, single_qubit_from_angles, tensor, tensor_all

RECORD_FAMILIES = ("bloch", "avg_deviation", "tangles", "correlations", "residuals")

ETA_PAPER = np.pi / 10.0
THETA_PAPER = 2.0 * np.pi / 5.0
DEFAULT_SEED = 20260824


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Full description of one experiment."""

    eta: float
    theta: float
    phi: float = 0.0
    n_env: int = 2
    env_preset: str = "separable_zeros"  # separable_zeros | bell | custom
    env_amplitudes: Optional[list] = None  # [[re, im], ...] when custom
    sequence: str = "random"  # random | periodic | explicit
    seed: Optional[int] = None
    indices: Optional[list] = None  # explicit sequence
    steps: int = 10000
    record: list = field(default_factory=lambda: ["bloch"])
    corr_samples: Optional[int] = None  # the T of the estimator
    corr_max_lag: Optional[int] = None
    every: int = 1
    out: str = "run"
    emit_metadata: bool = True

    def validate(self):
        if self.steps < 0:
            raise ConfigError("steps must be >= 0")
        if self.n_env < 1:
            raise ConfigError("n_env must be >= 1")
        if self.every < 1:
            raise ConfigError("every must be >= 1")
        if self.env_preset not in ("separable_zeros", "bell", "custom"):
            raise ConfigError(f"unknown env preset {self.env_preset!r}")
        if self.env_preset == "bell" and self.n_env != 2:
            raise ConfigError("bell preset requires n_env = 2")
        if self.env_preset == "custom":
            if self.env_amplitudes is None:
                raise ConfigError("custom preset requires env_amplitudes")
            if len(self.env_amplitudes) != 2**self.n_env:
                raise ConfigError(
                    f"custom preset needs {2**self.n_env} amplitudes"
                )
        if self.sequence not in ("random", "periodic", "explicit"):
            raise ConfigError(f"unknown sequence kind {self.sequence!r}")
        if self.sequence == "random" and self.seed is None:
            raise ConfigError("random sequence requires a seed")
        if self.sequence == "explicit":
            if not self.indices:
                raise ConfigError("explicit sequence requires indices")
            self.steps = len(self.indices)  # steps follow the given list
        for fam in self.record:
            if fam not in RECORD_FAMILIES:
                raise ConfigError(f"unknown record family {fam!r}")
        if "correlations" in self.record:
            if self.corr_samples is None or self.corr_max_lag is None:
                raise ConfigError("correlations require corr_samples and corr_max_lag")
            if self.steps < self.corr_samples + self.corr_max_lag:
                raise ConfigError("correlations require steps >= T + t_max")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)

    # -- derived objects -------------------------------------------------

    def initial_state(self) -> PureState:
        system = single_qubit_from_angles(self.theta, self.phi)
        if self.env_preset == "separable_zeros":
            zero = PureState(1, np.array([1.0, 0.0]))
            env = tensor_all([zero] * self.n_env)
        elif self.env_preset == "bell":
            env = bell_pair()
        else:
            amps = np.array([complex(re, im) for re, im in self.env_amplitudes])
            env = PureState(self.n_env, amps)
        return tensor(system, env)

    def collision_sequence(self) -> CollisionSequence:
        if self.sequence == "random":
            return sequence_random(self.steps, self.n_env, self.seed)
        if self.sequence == "periodic":
            return sequence_periodic(self.steps, self.n_env)
        return sequence_explicit(self.indices)

    def trajectory(self) -> Trajectory:
        return evolve(
            self.initial_state(),
            CollisionParams(self.eta, self.n_env),
            self.collision_sequence(),
        )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: Path, header: list, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _downsampled(ts, every):
    return [t for t in ts if t % every == 0]


def run(config: RunConfig) -> dict:
    """Execute a run; returns a dict of written file paths."""
    config.validate()
    t_start = time.time()
    written = {}
    out = Path(config.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    n = config.n_env + 1

    need_bloch = bool(
        {"bloch", "avg_deviation", "correlations"} & set(config.record)
    ) or config.emit_metadata
    series = None
    if need_bloch:
        series = bloch_series_multi(config.trajectory(), list(range(n)))

    keep = _downsampled(range(config.steps + 1), config.every)

    if "bloch" in config.record:
        header = ["t"] + [f"b{q}{k}" for q in range(n) for k in "xyz"]
        rows = (
            [str(t)] + [_fmt(s.component(k)[t]) for s in series for k in "xyz"]
            for t in keep
        )
        path = Path(f"{config.out}_bloch.csv")
        _write_csv(path, header, rows)
        written["bloch"] = path

    if "avg_deviation" in config.record:
        devs = [averaged_deviation(s) for s in series]
        header = ["t"] + [f"d{q}{k}" for q in range(n) for k in "xyz"]
        rows = (
            [str(t)] + [_fmt(d.component(k)[t]) for d in devs for k in "xyz"]
            for t in keep
        )
        path = Path(f"{config.out}_avg_deviation.csv")
        _write_csv(path, header, rows)
        written["avg_deviation"] = path

    if "tangles" in config.record:
        if n != 3:
            raise ConfigError("tangle recording requires n_env = 2")
        tag = time_averaged_tangles(config.trajectory())
        cols = [
            ("tau01", "tau_01"), ("tau02", "tau_02"), ("tau12", "tau_12"),
            ("tau012", "tau_012"),
            ("avg_tau01", "avg_tau_01"), ("avg_tau02", "avg_tau_02"),
            ("avg_tau12", "avg_tau_12"), ("avg_tau012", "avg_tau_012"),
        ]
        header = ["t"] + [c for c, _ in cols]
        rows = (
            [str(t)] + [_fmt(tag[key][t]) for _, key in cols] for t in keep
        )
        path = Path(f"{config.out}_tangles.csv")
        _write_csv(path, header, rows)
        written["tangles"] = path

    if "correlations" in config.record:
        path = _write_correlations(config, series)
        written["correlations"] = path

    if "residuals" in config.record:
        path = _write_residuals(config, keep)
        written["residuals"] = path

    if config.emit_metadata:
        delta = [0.0, 0.0, 0.0]
        if series is not None:
            total = np.stack(
                [sum(s.component(k) for s in series) for k in "xyz"]
            )
            delta = list(np.max(np.abs(total - total[:, :1]), axis=1))
        meta = {
            "config": config.to_dict(),
            "prng_algorithm": PRNG_ALGORITHM,
            "seed": config.seed,
            "tool_version": __version__,
            "duration_seconds": time.time() - t_start,
            "conservation_max_abs_delta": delta,
        }
        path = Path(f"{config.out}_metadata.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
        written["metadata"] = path
    return written


def _write_correlations(config: RunConfig, series) -> Path:
    n = config.n_env + 1
    corrs = [
        self_correlation(s, config.corr_samples, config.corr_max_lag)
        for s in series
    ]
    header = ["lag"] + [f"C{q}{k}" for q in range(n) for k in "xyz"]
    rows = (
        [str(lag)] + [_fmt(c.component(k)[lag]) for c in corrs for k in "xyz"]
        for lag in range(config.corr_max_lag + 1)
    )
    path = Path(f"{config.out}_correlations.csv")
    _write_csv(path, header, rows)
    return path


def _write_residuals(config: RunConfig, keep) -> Path:
    want_w = config.env_preset == "separable_zeros"
    want_ghz = config.n_env == 2
    if not (want_w or want_ghz):
        raise ConfigError("no residual diagnostic applies to this configuration")
    psi = single_qubit_from_angles(config.theta, config.phi)
    phi = PureState(1, np.array([1.0, 0.0]))
    header = ["t"]
    if want_w:
        header.append("w_residual")
    if want_ghz:
        header.append("ghz_residual")
    keep_set = set(keep)
    rows = []
    for t, state in config.trajectory():
        if t not in keep_set:
            continue
        row = [str(t)]
        if want_w:
            row.append(_fmt(w_span_residual(state, psi, phi)))
        if want_ghz:
            row.append(_fmt(ghz_span_residual(state)))
        rows.append(row)
    path = Path(f"{config.out}_residuals.csv")
    _write_csv(path, header, rows)
    return path


def correlate(config: RunConfig) -> dict:
    """Run with the correlation family forced on."""
    if "correlations" not in config.record:
        config = dataclasses.replace(config, record=list(config.record) + ["correlations"])
    return run(config)


def _log_spaced_steps(lo: int, hi: int, per_decade: int = 50) -> np.ndarray:
    pts = np.unique(
        np.round(
            np.logspace(np.log10(lo), np.log10(hi),
                        max(10, int(per_decade * np.log10(hi / lo))))
        ).astype(int)
    )
    return pts[(pts >= lo) & (pts <= hi)]


def deviation_slope(dev_component: np.ndarray, window) -> float:
    """Log-log slope of |running deviation| sampled at log-spaced steps."""
    lo, hi = window
    ts = _log_spaced_steps(int(lo), int(min(hi, len(dev_component) - 1)))
    ys = np.abs(dev_component[ts])
    mask = ys > 0
    return loglog_slope(ts[mask], ys[mask], (lo, hi))


def sweep(base: RunConfig, seeds: list, window=None) -> dict:
    """Per-seed decay slopes of |<db_z>| for every qubit, plus summary rows."""
    if not seeds:
        raise ConfigError("sweep requires at least one seed")
    base.validate()
    if base.sequence != "random":
        raise ConfigError("sweep requires a random sequence")
    n = base.n_env + 1
    if window is None:
        window = (100.0, float(base.steps))
    slopes = np.empty((len(seeds), n))
    for i, seed in enumerate(seeds):
        cfg = dataclasses.replace(base, seed=int(seed))
        series = bloch_series_multi(cfg.trajectory(), list(range(n)))
        for q, s in enumerate(series):
            slopes[i, q] = deviation_slope(averaged_deviation(s).dz, window)
    header = ["seed"] + [f"slope_b{q}z" for q in range(n)]
    rows = [
        [str(int(seed))] + [_fmt(v) for v in slopes[i]]
        for i, seed in enumerate(seeds)
    ]
    rows.append(["mean"] + [_fmt(v) for v in slopes.mean(axis=0)])
    rows.append(["stddev"] + [_fmt(v) for v in slopes.std(axis=0)])
    out = Path(f"{base.out}_sweep.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(out, header, rows)
    return {"sweep": out, "slopes": slopes}


# -- recipes ------------------------------------------------------------


def _recipe_configs() -> dict:
    base = dict(eta=ETA_PAPER, theta=THETA_PAPER, n_env=2)
    recipes = {}
    for seq in ("random", "periodic"):
        seqd = dict(sequence=seq)
        if seq == "random":
            seqd["seed"] = DEFAULT_SEED
        for env, envd in (
            ("separable", dict(env_preset="separable_zeros")),
            ("bell", dict(env_preset="bell")),
        ):
            tail = {**base, **seqd, **envd}
            recipes[f"fig1-{seq}-{env}"] = dict(
                **tail, steps=10_000, record=["bloch"]
            )
            recipes[f"fig2-{seq}-{env}"] = dict(
                **tail, steps=1_000_000, record=["avg_deviation"], every=100
            )
            recipes[f"fig3-{seq}-{env}"] = dict(
                **tail, steps=1_001_000, record=["correlations"],
                corr_samples=1_000_000, corr_max_lag=1_000,
            )
            recipes[f"fig4-{seq}-{env}"] = dict(
                **tail, steps=1_000_000, record=["tangles"], every=1_000
            )
    return recipes


RECIPE_ALIASES = {
    "fig4-bell": "fig4-random-bell",
    "fig4-separable": "fig4-random-separable",
}


def recipe_config(name: str) -> RunConfig:
    recipes = _recipe_configs()
    name = RECIPE_ALIASES.get(name, name)
    if name not in recipes:
        known = sorted(recipes) + sorted(RECIPE_ALIASES)
        raise ConfigError(f"unknown recipe {name!r}; known: {', '.join(known)}")
    return RunConfig(**recipes[name], out=name)


# -- argument parsing ---------------------------------------------------


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--eta", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--n-env", dest="n_env", type=int)
    p.add_argument("--env", help="zeros | bell | custom:<a0,a1,...>")
    p.add_argument("--seq", help="random | periodic | explicit:<i1,i2,...>")
    p.add_argument("--seed", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--record", help="comma list of " + ",".join(RECORD_FAMILIES))
    p.add_argument("--corr-samples", dest="corr_samples", type=int)
    p.add_argument("--corr-max-lag", dest="corr_max_lag", type=int)
    p.add_argument("--every", type=int)
    p.add_argument("--out")
    p.add_argument("--no-metadata", action="store_true")


def _config_from_args(args, base: Optional[RunConfig] = None) -> RunConfig:
    d = base.to_dict() if base is not None else {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            d.update(json.load(fh))
    for name in ("eta", "theta", "phi", "n_env", "seed", "steps",
                 "corr_samples", "corr_max_lag", "every", "out"):
        v = getattr(args, name, None)
        if v is not None:
            d[name] = v
    if args.env:
        if args.env == "zeros":
            d["env_preset"] = "separable_zeros"
        elif args.env == "bell":
            d["env_preset"] = "bell"
        elif args.env.startswith("custom:"):
            amps = [complex(a) for a in args.env[len("custom:"):].split(",")]
            d["env_preset"] = "custom"
            d["env_amplitudes"] = [[a.real, a.imag] for a in amps]
        else:
            raise ConfigError(f"bad --env value {args.env!r}")
    if args.seq:
        if args.seq in ("random", "periodic"):
            d["sequence"] = args.seq
        elif args.seq.startswith("explicit:"):
            d["sequence"] = "explicit"
            d["indices"] = [int(i) for i in args.seq[len("explicit:"):].split(",")]
        else:
            raise ConfigError(f"bad --seq value {args.seq!r}")
    if args.record:
        d["record"] = args.record.split(",")
    if getattr(args, "no_metadata", False):
        d["emit_metadata"] = False
    if "eta" not in d or "theta" not in d:
        raise ConfigError("eta and theta are required (flag or config file)")
    return RunConfig.from_dict(d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collide",
        description="Repeated-collision qubit dynamics simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one trajectory and export CSVs")
    _add_common_flags(p_run)

    p_corr = sub.add_parser("correlate", help="run and export self-correlations")
    _add_common_flags(p_corr)

    p_sweep = sub.add_parser("sweep", help="decay-slope statistics over seeds")
    _add_common_flags(p_sweep)
    p_sweep.add_argument("--seeds", required=True, help="comma list of seeds")
    p_sweep.add_argument("--window", help="fit window as lo:hi (default 100:steps)")

    p_recipe = sub.add_parser("recipe", help="run a built-in figure recipe")
    p_recipe.add_argument("name")
    _add_common_flags(p_recipe)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "recipe":
            config = _config_from_args(args, base=recipe_config(args.name))
            if "correlations" in config.record:
                written = correlate(config)
            else:
                written = run(config)
        elif args.command == "run":
            written = run(_config_from_args(args))
        elif args.command == "correlate":
            written = correlate(_config_from_args(args))
        else:
            config = _config_from_args(args)
            seeds = [int(s) for s in args.seeds.split(",") if s]
            window = None
            if args.window:
                lo, hi = args.window.split(":")
                window = (float(lo), float(hi))
            written = sweep(config, seeds, window=window)
            written.pop("slopes")
    except (ConfigError, ValueError) as exc:
        print(f"collide: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"collide: I/O error: {exc}", file=sys.stderr)
        return 3
    for family, path in written.items():
        print(f"{family}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
