#!/usr/bin/env python3
"""Run the two near-identical bifurcation starts and report their separation."""
import argparse
import json

import numpy as np

from lorenz_vqls import LorenzParams, State3, trajectory

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=10000)
    ap.add_argument("--h", type=float, default=1e-3)
    ap.add_argument("--rho", type=float, default=13.92655742)
    ap.add_argument("--out-prefix", default="bifurcation")
    args = ap.parse_args()

    params = LorenzParams(rho=args.rho)
    runs = {
        "plus": State3(1e-16, 1e-16, 1e-16),
        "minus": State3(1e-16, -1e-16, 1e-16),
    }
    finals = {}
    for tag, start in runs.items():
        traj = trajectory(start, params, args.h, args.steps, solver="direct")
        path = f"{args.out_prefix}_{tag}.csv"
        with open(path, "w", newline="\n") as fh:
            fh.write("step,t,x,y,z\n")
            for n, row in enumerate(traj.states):
                fields = [str(n), f"{n * args.h:.17g}"] + [f"{v:.17g}" for v in row]
                fh.write(",".join(fields) + "\n")
        finals[tag] = traj.states[-1]
    separation = float(np.linalg.norm(finals["plus"] - finals["minus"]))
    print(json.dumps({"rho": args.rho, "steps": args.steps, "final_separation": separation}))
