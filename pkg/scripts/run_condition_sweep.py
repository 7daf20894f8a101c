#!/usr/bin/env python3
"""Condition numbers of the per-step system over a step-size grid."""
import argparse
import sys

from lorenz_vqls.cli import main as cli_main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h-min", type=float, default=0.001)
    ap.add_argument("--h-max", type=float, default=0.1)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--out", default="condition_sweep.csv")
    args = ap.parse_args()

    sys.exit(cli_main([
        "cond-sweep", "--h-min", str(args.h_min), "--h-max", str(args.h_max),
        "--count", str(args.count), "--out", args.out,
    ]))
