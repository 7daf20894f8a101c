#!/usr/bin/env python3
"""Direct-vs-variational comparison plus step-halving error estimates."""
import argparse
import sys

from lorenz_vqls.cli import main as cli_main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--h", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--compare-out", default="compare.csv")
    ap.add_argument("--richardson-out", default="richardson.csv")
    args = ap.parse_args()

    code = cli_main([
        "compare", "--start", "1,-2,4", "--h", str(args.h),
        "--steps", str(args.steps), "--seed", str(args.seed),
        "--out", args.compare_out,
    ])
    if code != 0:
        sys.exit(code)
    sys.exit(cli_main([
        "richardson", "--start", "1,-2,4",
        "--h-list", f"{args.h},{args.h / 2}",
        "--steps", str(args.steps), "--solver", "direct",
        "--out", args.richardson_out,
    ]))
