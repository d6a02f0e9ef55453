"""Command line: heatmaps and size-sweep figures from sweep CSVs."""

from __future__ import annotations

import argparse
import csv
import sys

from anticoord_plots.render import render_heatmap, render_size_sweep


def _variants_in(csv_path) -> list[str]:
    with open(csv_path, newline="") as fh:
        return sorted({row["variant"] for row in csv.DictReader(fh)})


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="anticoord-plots")
    sub = parser.add_subparsers(dest="command", required=True)

    p_heat = sub.add_parser("heatmap", help="mean-effort heatmap over the constant grid")
    p_heat.add_argument("csv")
    p_heat.add_argument("--variant", help="one variant (default: every variant in the file)")
    p_heat.add_argument("--out", required=True, help="output directory")

    p_size = sub.add_parser("sizesweep", help="mean effort vs network size")
    p_size.add_argument("csv")
    p_size.add_argument("--out", required=True, help="output directory")

    args = parser.parse_args(argv)
    if args.command == "heatmap":
        variants = [args.variant] if args.variant else _variants_in(args.csv)
        for variant in variants:
            path = render_heatmap(args.csv, variant, args.out)
            print(f"wrote {path}")
    else:
        path = render_size_sweep(args.csv, args.out)
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
