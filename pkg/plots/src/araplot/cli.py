"""The ``plot`` command: render a figure kind from CSV inputs.

Usage: plot <kind> <csv...> -o out.png [--cutoff V] [--diagram D] [--edges E]
           [--colormap NAME] [--xlabel S] [--ylabel S]
"""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plot",
                                 description="Render reverse-annealing CSV datasets")
    ap.add_argument("kind", choices=KINDS)
    ap.add_argument("inputs", nargs="+", help="input CSV files for the kind")
    ap.add_argument("-o", "--output", required=True, help="output image (.png or .svg)")
    ap.add_argument("--cutoff", type=float,
                    help="contour kind: whiteout regions with phi above this")
    ap.add_argument("--diagram", help="trajectory kind: diagram CSV for the path inset")
    ap.add_argument("--edges", help="transition edge CSV overlay")
    ap.add_argument("--colormap", default="viridis")
    ap.add_argument("--xlabel")
    ap.add_argument("--ylabel")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    labels = {}
    if args.xlabel:
        labels["x"] = args.xlabel
    if args.ylabel:
        labels["y"] = args.ylabel
    try:
        spec = FigureSpec(kind=args.kind, inputs=tuple(args.inputs),
                          output=args.output, diagram=args.diagram,
                          edges=args.edges, cutoff=args.cutoff,
                          colormap=args.colormap, labels=labels)
        out = render(spec)
    except SchemaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
