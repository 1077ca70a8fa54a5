#!/usr/bin/env python3
"""Emit iso-error contour data for plotting.

Writes one CSV with the optimal-radius curves and their statistical-radius
(dashed) counterparts for each requested error-to-noise ratio.

    python scripts/contour_curves.py --rhos 1,2,3,5 --points 40 --out contours.csv
"""

import argparse
import sys

import numpy as np

from socprec.theory import contour


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rhos", default="1,2,3,5")
    ap.add_argument("--points", type=int, default=40)
    ap.add_argument("--beta-min", type=float, default=0.01)
    ap.add_argument("--beta-max", type=float, default=0.55)
    ap.add_argument("--signed", action="store_true")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    grid = np.linspace(args.beta_min, args.beta_max, args.points)
    lines = ["rho,beta_w,alpha,mode"]
    for rho in (float(v) for v in args.rhos.split(",")):
        for mode in ("optimal-radius", "sqrt-alpha-radius"):
            for pt in contour(rho, grid, mode, args.signed):
                if pt.ok:
                    lines.append(f"{rho:g},{pt.beta_w!r},{pt.alpha!r},{mode}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {len(lines) - 1} points to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
