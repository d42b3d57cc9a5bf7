"""Time-series panels of Bloch components from *_bloch.csv files."""

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

DEFAULT_COLUMNS = ["b0z"]


def plot_bloch(csv_paths, out, columns=None, spec=None):
    """One panel per CSV; one curve per requested column."""
    if spec is not None:
        panels = [(p["csv"], p.get("columns", DEFAULT_COLUMNS)) for p in spec["panels"]]
        out = spec.get("out", out)
    else:
        panels = [(path, columns or DEFAULT_COLUMNS) for path in csv_paths]
    fig, axes = panel_grid(len(panels))
    for ax, (path, cols) in zip(axes, panels):
        table = read_csv(path)
        require_columns(table, ["t"] + list(cols), path)
        for col in cols:
            style = {"marker": "."} if len(table["t"]) == 1 else {}
            ax.plot(table["t"], table[col], lw=0.7, label=col, **style)
        ax.set_xlabel("t")
        ax.set_ylabel("Bloch component")
        ax.legend(fontsize=7)
        ax.set_title(str(path).rsplit("/", 1)[-1], fontsize=8)
    fig.tight_layout()
    return save_figure(fig, out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csvs", nargs="*", help="up to four *_bloch.csv files")
    parser.add_argument("-o", "--out", default="bloch.svg")
    parser.add_argument("--columns", help="comma list, default b0z")
    parser.add_argument("--spec", help="figure-spec JSON (overrides positionals)")
    args = parser.parse_args(argv)
    try:
        spec = load_spec(args.spec) if args.spec else None
        if spec is None and not args.csvs:
            raise FigureError("no input CSVs given")
        cols = args.columns.split(",") if args.columns else None
        path = plot_bloch(args.csvs, args.out, columns=cols, spec=spec)
    except FigureError as exc:
        warn(f"plot-bloch: error: {exc}")
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
