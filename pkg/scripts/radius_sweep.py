#!/usr/bin/env python3
"""Sweep the constraint radius for one regime: prediction vs simulation.

Shows how the error norm grows as the radius moves away from its optimum.

    python scripts/radius_sweep.py --alpha 0.5 --beta-over-alpha 0.27 --n 400 --trials 100 --seed 11
"""

import argparse
import sys
from math import sqrt

from socprec.experiments import RunConfig, run_trials
from socprec.theory import RecoveryRegime, optimal_radius, predict_generic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, required=True)
    ap.add_argument("--beta-over-alpha", type=float, required=True)
    ap.add_argument("--sigma", type=float, default=1.0)
    ap.add_argument("--signed", action="store_true")
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--fractions", default="opt,0.4,0.6,0.8,1.0",
                    help="radius as fraction of sqrt(m), or 'opt'")
    args = ap.parse_args()

    alpha = args.alpha
    beta = alpha * args.beta_over_alpha
    r_opt = optimal_radius(alpha, beta, args.sigma, args.signed)
    print(f"alpha={alpha} beta_w={beta:.4f} r_opt/sqrt(n)={r_opt:.4f}")
    print(f"{'r_mode':>12} {'w_pred':>8} {'w_mc':>8} {'-f_pred':>8} {'-f_mc':>8}")
    for frac in args.fractions.split(","):
        r_mode = "opt" if frac == "opt" else f"scaled:{float(frac):g}"
        r_sc = r_opt if frac == "opt" else args.sigma * sqrt(float(frac) * alpha)
        theory = predict_generic(RecoveryRegime(
            alpha=alpha, beta_w=beta, sigma=args.sigma, r_sc=r_sc,
            signed=args.signed))
        report = run_trials(RunConfig(
            alpha=alpha, beta_w=beta, n=args.n, trials=args.trials,
            seed=args.seed, sigma=args.sigma, r_mode=r_mode,
            signed=args.signed, engines=("socp",)))
        w_mc, _ = report.empirical["w_norm_socp"]
        f_mc, _ = report.empirical["neg_fobj_over_sqrt_n"]
        print(f"{r_mode:>12} {theory.w_norm:8.4f} {w_mc:8.4f} "
              f"{-theory.xi_prim_limit:8.4f} {f_mc:8.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
