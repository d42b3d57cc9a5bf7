"""Log-log panels of |running Bloch deviation| with a power-law guide line."""

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

DEFAULT_COLUMNS = ["d0z", "d1z", "d2z"]


def plot_avg_deviation(csv_paths, out, columns=None, guide_exponent=-0.5, spec=None):
    if spec is not None:
        panels = [
            (p["csv"], p.get("columns", DEFAULT_COLUMNS),
             p.get("guide_exponent", guide_exponent))
            for p in spec["panels"]
        ]
        out = spec.get("out", out)
    else:
        panels = [(p, columns or DEFAULT_COLUMNS, guide_exponent) for p in csv_paths]
    fig, axes = panel_grid(len(panels))
    dropped = 0
    for ax, (path, cols, exponent) in zip(axes, panels):
        table = read_csv(path)
        require_columns(table, ["t"] + list(cols), path)
        t = table["t"]
        for col in cols:
            y = np.abs(table[col])
            keep = (t > 0) & (y > 0)
            dropped += int(np.sum(~keep & (t > 0)))
            ax.plot(t[keep], y[keep], lw=0.7, label=col)
        pos = t[t > 0]
        if pos.size:
            anchor = np.max([np.abs(table[c][t > 0]).max() for c in cols])
            guide = anchor * (pos / pos[0]) ** exponent
            ax.plot(pos, guide, "k--", lw=0.8, label=f"t^{exponent:g}")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("t")
        ax.set_ylabel("|<db>|")
        ax.legend(fontsize=7)
    if dropped:
        warn(f"plot-avgdev: dropped {dropped} nonpositive values from log panels")
    fig.tight_layout()
    return save_figure(fig, out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csvs", nargs="*", help="up to four *_avg_deviation.csv files")
    parser.add_argument("-o", "--out", default="avg_deviation.svg")
    parser.add_argument("--columns", help="comma list, default d0z,d1z,d2z")
    parser.add_argument("--guide-exponent", type=float, default=-0.5)
    parser.add_argument("--spec", help="figure-spec JSON (overrides positionals)")
    args = parser.parse_args(argv)
    try:
        spec = load_spec(args.spec) if args.spec else None
        if spec is None and not args.csvs:
            raise FigureError("no input CSVs given")
        cols = args.columns.split(",") if args.columns else None
        path = plot_avg_deviation(
            args.csvs, args.out, columns=cols,
            guide_exponent=args.guide_exponent, spec=spec,
        )
    except FigureError as exc:
        warn(f"plot-avgdev: error: {exc}")
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
