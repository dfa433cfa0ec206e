#!/usr/bin/env python3
"""Dynamics datasets: trajectories at several runtimes for the success and
failure parameter sets, the final-error sweep over runtime for both
protocols, and the mean-field versus finite-N oracle comparisons."""

import argparse
import os
import sys

from revanneal.cli import main as cli_main

SUCCESS = dict(p=3, alpha=0.1, x=0.1)
FAILURE = dict(p=5, alpha=0.9, x=0.2)


def run(args_list):
    rc = cli_main(args_list)
    if rc != 0:
        sys.exit(rc)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="data")
    args = ap.parse_args()
    out = args.outdir
    os.makedirs(out, exist_ok=True)

    for tag, cfg, taus in (("success", SUCCESS, {"ARA": (20, 40, 80), "SRA": (2, 5, 10)}),
                           ("failure", FAILURE, {"ARA": (10, 20, 40), "SRA": (10, 20, 40)})):
        for model, tau_list in taus.items():
            for tau in tau_list:
                run(["evolve", f"model={model}", f"p={cfg['p']}",
                     f"alpha={cfg['alpha']}", f"x={cfg['x']}",
                     "path=linear-sqrt", f"tau={tau}",
                     f"out={os.path.join(out, f'traj_{tag}_{model.lower()}_tau{tau}.csv')}"])

    for model, taus in (("ARA", "5,10,20,40,80"), ("SRA", "1,2,5,10,20,50")):
        run(["tau-sweep", f"model={model}", f"p={SUCCESS['p']}",
             f"alpha={SUCCESS['alpha']}", f"x={SUCCESS['x']}",
             "path=linear-sqrt", f"tau={taus}",
             f"out={os.path.join(out, f'sweep_success_{model.lower()}.csv')}"])

    run(["oracle-compare", "model=ARA", "p=3", "alpha=0.1", "x=0.1",
         "path=linear-sqrt", "tau=10", "N=200",
         f"out={os.path.join(out, 'oracle_ara.csv')}"])
    run(["oracle-compare", "model=SRA", "p=3", "alpha=0.1", "x=0.1",
         "path=linear-sqrt", "tau=5", "N=2000", "n-runs=100", "seed=1234",
         f"out={os.path.join(out, 'oracle_sra.csv')}"])
