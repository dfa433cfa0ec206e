#!/usr/bin/env python3
"""Regenerate the (s, lambda) phase-diagram datasets for both protocols.

Writes, per parameter set and protocol, the magnetization grid, the
transition edge list, and a JSON summary with the feasibility verdicts.
The three presets are the published success, failure, and competition
cases; pass --preset to select one, or none to run all three.
"""

import argparse
import os
import sys

from revanneal.cli import main as cli_main

PRESETS = {
    "success": dict(p=3, alpha=0.5, x=0.2, resolution=201),
    "failure": dict(p=5, alpha=0.9, x=0.2, resolution=201),
    "competition": dict(p=3, alpha=0.6, x=0.25, resolution=301),
}


def run(preset: str, outdir: str, threads: int) -> None:
    cfg = PRESETS[preset]
    for model in ("ARA", "SRA"):
        out = os.path.join(outdir, f"{preset}_{model.lower()}.csv")
        rc = cli_main([
            "phase-diagram", f"model={model}", f"p={cfg['p']}",
            f"alpha={cfg['alpha']}", f"x={cfg['x']}",
            f"resolution={cfg['resolution']}", f"threads={threads}",
            f"out={out}"])
        if rc != 0:
            sys.exit(rc)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--preset", choices=sorted(PRESETS), nargs="*",
                    default=sorted(PRESETS))
    ap.add_argument("--outdir", default="data")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    for preset in args.preset:
        run(preset, args.outdir, args.threads)
