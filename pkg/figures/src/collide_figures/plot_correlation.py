"""Correlation-decay panels from *_correlations.csv, with semilog insets."""

import argparse
import sys

import numpy as np

from .common import (
    FigureError,
    load_spec,
    panel_grid,
    read_csv,
    require_columns,
    save_figure,
    warn,
)

DEFAULT_COLUMNS = ["C0z"]


def plot_correlation(csv_paths, out, columns=None, spec=None):
    if spec is not None:
        panels = [(p["csv"], p.get("columns", DEFAULT_COLUMNS)) for p in spec["panels"]]
        out = spec.get("out", out)
    else:
        panels = [(p, columns or DEFAULT_COLUMNS) for p in csv_paths]
    fig, axes = panel_grid(len(panels))
    for ax, (path, cols) in zip(axes, panels):
        table = read_csv(path)
        require_columns(table, ["lag"] + list(cols), path)
        lag = table["lag"]
        if np.any(lag < 0):
            raise FigureError(f"{path}: negative lags")
        for col in cols:
            ax.plot(lag, table[col], lw=0.7, label=col)
        ax.set_xlabel("lag")
        ax.set_ylabel("C")
        ax.legend(fontsize=7)
        # semilog inset of |C| for the first column
        magnitude = np.abs(table[cols[0]])
        if np.any(magnitude > 0):
            inset = ax.inset_axes([0.55, 0.55, 0.4, 0.4])
            keep = magnitude > 0
            inset.semilogy(lag[keep], magnitude[keep], lw=0.6)
            inset.tick_params(labelsize=6)
        else:
            warn(f"plot-correlation: {path}: all-zero column, inset suppressed")
    fig.tight_layout()
    return save_figure(fig, out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csvs", nargs="*", help="up to four *_correlations.csv files")
    parser.add_argument("-o", "--out", default="correlation.svg")
    parser.add_argument("--columns", help="comma list, default C0z")
    parser.add_argument("--spec", help="figure-spec JSON (overrides positionals)")
    args = parser.parse_args(argv)
    try:
        spec = load_spec(args.spec) if args.spec else None
        if spec is None and not args.csvs:
            raise FigureError("no input CSVs given")
        cols = args.columns.split(",") if args.columns else None
        path = plot_correlation(args.csvs, args.out, columns=cols, spec=spec)
    except FigureError as exc:
        warn(f"plot-correlation: error: {exc}")
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
