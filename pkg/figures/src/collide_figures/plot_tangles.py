"""Time-averaged tangle panels from *_tangles.csv files."""

import argparse
import sys

from .common import (
    FigureError,
    load_spec,
    panel_grid,
    read_csv,
    require_columns,
    save_figure,
    warn,
)

AVERAGED_COLUMNS = ["avg_tau01", "avg_tau02", "avg_tau12", "avg_tau012"]


def plot_tangles(csv_paths, out, spec=None):
    if spec is not None:
        panels = [p["csv"] for p in spec["panels"]]
        out = spec.get("out", out)
    else:
        panels = list(csv_paths)
    fig, axes = panel_grid(len(panels))
    for ax, path in zip(axes, panels):
        table = read_csv(path)
        cols = list(AVERAGED_COLUMNS)
        if "avg_tau012" not in table:
            cols.remove("avg_tau012")
            warn(f"plot-tangles: {path}: no avg_tau012 column, three-curve fallback")
        require_columns(table, ["t"] + cols, path)
        for col in cols:
            ax.plot(table["t"], table[col], lw=0.9, label=col)
        ax.set_xlabel("t")
        ax.set_ylabel("time-averaged tangle")
        ax.legend(fontsize=7)
    fig.tight_layout()
    return save_figure(fig, out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csvs", nargs="*", help="up to four *_tangles.csv files")
    parser.add_argument("-o", "--out", default="tangles.svg")
    parser.add_argument("--spec", help="figure-spec JSON (overrides positionals)")
    args = parser.parse_args(argv)
    try:
        spec = load_spec(args.spec) if args.spec else None
        if spec is None and not args.csvs:
            raise FigureError("no input CSVs given")
        path = plot_tangles(args.csvs, args.out, spec=spec)
    except FigureError as exc:
        warn(f"plot-tangles: error: {exc}")
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
