#!/usr/bin/env python3
"""Landscape datasets: the three-well contour grid and the reduced-landscape
waterfalls along the discontinuous (lambda = 0) and transition-avoiding
(three-stage) routes.

The waterfall output is one reduced-landscape CSV per sampled point of the
route, numbered in path order, ready for the waterfall plot command."""

import argparse
import os
import sys

import numpy as np

from revanneal.cli import main as cli_main
from revanneal.model import AnnealPath, schedule_at


def waterfall(outdir, tag, waypoints, n_curves, p, alpha, x):
    path = AnnealPath.piecewise(waypoints, tau=1.0)
    for k, t in enumerate(np.linspace(0.0, 1.0, n_curves)):
        pt = schedule_at(path, float(t))
        out = os.path.join(outdir, f"waterfall_{tag}_{k:03d}.csv")
        rc = cli_main([
            "reduced-landscape", "model=ARA", f"p={p}", f"alpha={alpha}",
            f"x={x}", f"s={pt.s}", f"lam={pt.lam}", "n-md=401", f"out={out}"])
        if rc != 0:
            sys.exit(rc)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="data")
    ap.add_argument("--curves", type=int, default=11)
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    # three-well contour example
    rc = cli_main(["landscape", "model=ARA", "p=5", "alpha=0.9", "x=0.2",
                   "s=0.4", "lam=0.88", "grid-n=401",
                   f"out={os.path.join(args.outdir, 'landscape_three_wells.csv')}"])
    if rc != 0:
        sys.exit(rc)

    # discontinuous route: straight line at lambda = 0
    waterfall(args.outdir, "discontinuous", [(0, 0), (1, 0)], args.curves,
              p=3, alpha=0.5, x=0.2)
    # transition-avoiding three-stage route
    waterfall(args.outdir, "avoiding",
              [(0, 0), (0.2, 0.7), (0.6, 0.7), (1, 0)], args.curves,
              p=3, alpha=0.5, x=0.2)
