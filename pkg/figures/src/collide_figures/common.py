"""Shared plumbing: CSV loading, panel layout, deterministic figure output."""

import json
import sys
import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

MAX_PANELS = 4

# fixed salt so SVG element ids do not change between identical reruns
matplotlib.rcParams["svg.hashsalt"] = "collide-figures"


class FigureError(RuntimeError):
    pass


def read_csv(path) -> dict:
    """Load a collide CSV as a mapping column name -> float array."""
    path = Path(path)
    try:
        with warnings.catch_warnings():
            # an empty file warns, then trips an IndexError; report both as FigureError
            warnings.simplefilter("ignore")
            data = np.genfromtxt(path, delimiter=",", names=True)
    except (OSError, ValueError, IndexError) as exc:
        raise FigureError(f"{path}: cannot read CSV ({exc})") from exc
    if data.dtype.names is None:
        raise FigureError(f"{path}: no header row")
    if data.size == 0:
        raise FigureError(f"{path}: no data rows")
    data = np.atleast_1d(data)
    return {name: np.asarray(data[name], dtype=float) for name in data.dtype.names}


def require_columns(table: dict, columns, path) -> None:
    missing = [c for c in columns if c not in table]
    if missing:
        raise FigureError(
            f"{path}: missing columns {missing}; available: {sorted(table)}"
        )


def panel_grid(n_panels: int):
    """Figure with up to four panels in the paper's 2x2 layout."""
    if not 1 <= n_panels <= MAX_PANELS:
        raise FigureError(f"need 1..{MAX_PANELS} panels, got {n_panels}")
    rows = 1 if n_panels <= 2 else 2
    cols = 1 if n_panels == 1 else 2
    fig, axes = plt.subplots(rows, cols, figsize=(4.0 * cols, 3.0 * rows))
    axes = np.atleast_1d(axes).ravel()
    for ax in axes[n_panels:]:
        ax.set_visible(False)
    return fig, list(axes[:n_panels])


def save_figure(fig, out) -> Path:
    """Write vector output with no timestamp metadata (idempotent reruns)."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if out.suffix == ".svg" else None
    fig.savefig(out, metadata=metadata)
    plt.close(fig)
    return out


def load_spec(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        spec = json.load(fh)
    panels = spec.get("panels", [])
    if not 1 <= len(panels) <= MAX_PANELS:
        raise FigureError(f"spec must define 1..{MAX_PANELS} panels")
    return spec


def warn(message: str) -> None:
    print(message, file=sys.stderr)
