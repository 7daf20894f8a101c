#!/usr/bin/env python3
"""Integrate the attractor preset and write the trajectory CSV."""
import argparse
import sys

from lorenz_vqls.cli import main as cli_main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--solver", default="direct", choices=["explicit", "direct", "vqls"])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="attractor.csv")
    args = ap.parse_args()

    argv = [
        "simulate", "--preset", "attractor",
        "--solver", args.solver, "--steps", str(args.steps), "--out", args.out,
    ]
    if args.solver == "vqls":
        argv += ["--seed", str(args.seed)]
    sys.exit(cli_main(argv))
