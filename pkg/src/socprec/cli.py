"""Command-line interface.

Subcommands: predict, contour, genie, simulate, table.  Machine-readable
output goes to stdout (a single JSON document or CSV); all logging goes to
stderr.  Exit codes are a stable contract: 0 success, 2 domain or regime
errors, 3 table cells failing their tolerance, 64 usage errors.
"""

import argparse
import json
import logging
import sys

from . import tables
from .errors import SocprecError
from .experiments import RunConfig, parse_r_mode, run_trials, scaled_radius
from .theory import RecoveryRegime, contour, predict_generic

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_CELLS = 3
EXIT_USAGE = 64

log = logging.getLogger("socprec")


class UsageError(Exception):
    """Bad flag values detected after argparse (maps to exit 64)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_regime_flags(p, radius=True):
    p.add_argument("--alpha", type=float, required=True,
                   help="measurements per unknown, m/n")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta-over-alpha", type=float,
                       help="sparsity as a fraction of alpha (table convention)")
    group.add_argument("--beta", type=float, help="sparsity ratio k/n")
    p.add_argument("--sigma", type=float, default=1.0, help="noise std dev")
    if radius:
        p.add_argument("--r-mode", default="sqrt-m",
                       help="constraint radius policy: sqrt-m | opt | scaled:<c>")
    p.add_argument("--signed", action="store_true",
                   help="sign-constrained recovery")


def _add_output_flags(p, default_format="json"):
    p.add_argument("--format", choices=("json", "csv"), default=default_format)
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--quiet", action="store_true", help="suppress progress logs")


def _beta_w(args):
    beta = args.beta if args.beta is not None else args.alpha * args.beta_over_alpha
    return beta


def _regime(args) -> RecoveryRegime:
    beta = _beta_w(args)
    mode = parse_r_mode(args.r_mode)
    return RecoveryRegime(
        alpha=args.alpha, beta_w=beta, sigma=args.sigma,
        r_sc=scaled_radius(mode, args.alpha, beta, args.sigma, args.signed),
        signed=args.signed)


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_predict(args):
    point = predict_generic(_regime(args))
    _emit(json.dumps(point.to_dict(), sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def _parse_beta_grid(text, lo, hi):
    try:
        if "," in text or "." in text:
            grid = [float(v) for v in text.split(",") if v.strip()]
        else:
            count = int(text)
            if count < 1:
                raise UsageError("beta grid count must be >= 1")
            import numpy as np
            grid = list(np.linspace(lo, hi, count))
    except ValueError as exc:
        raise UsageError(f"bad --beta-grid value: {exc}") from None
    if not grid:
        raise UsageError("empty beta grid")
    return grid


def _cmd_contour(args):
    rhos = [float(v) for v in args.rho.split(",") if v.strip()]
    if not rhos:
        raise UsageError("at least one rho is required")
    grid = _parse_beta_grid(args.beta_grid, args.beta_min, args.beta_max)
    modes = (("optimal-radius", "sqrt-alpha-radius")
             if args.mode == "both" else (args.mode,))
    lines = ["rho,beta_w,alpha,mode"]
    records = []
    for mode in modes:
        for rho in rhos:
            for pt in contour(rho, grid, mode, args.signed, sigma=args.sigma):
                if not pt.ok:
                    log.info("skipped unreachable point rho=%g beta_w=%g (%s)",
                             rho, pt.beta_w, mode)
                    continue
                lines.append(f"{rho:g},{pt.beta_w!r},{pt.alpha!r},{mode}")
                records.append({"rho": rho, "beta_w": pt.beta_w,
                                "alpha": pt.alpha, "mode": mode})
    if args.format == "csv":
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps({"points": records}, sort_keys=True, indent=2) + "\n",
              args.out)
    return EXIT_OK


def _cmd_run(args, engines):
    config = RunConfig(
        alpha=args.alpha, beta_w=_beta_w(args), n=args.n, trials=args.trials,
        seed=args.seed, sigma=args.sigma, r_mode=args.r_mode,
        signed=args.signed, engines=engines, spike=args.spike,
        threads=args.threads)
    report = run_trials(config)
    if args.format == "csv":
        lines = ["stat,mean,stderr,theory"]
        theory = report.theory.to_dict()
        mapping = {"nu_gen": "nu_gen", "w_norm_genie": "w_norm",
                   "xi_over_sqrt_n": "xi_prim_limit",
                   "w_norm_socp": "w_norm",
                   "neg_fobj_over_sqrt_n": "neg_xi_prim_limit"}
        for stat in sorted(report.empirical):
            mean, stderr = report.empirical[stat]
            lines.append(f"{stat},{mean!r},{stderr!r},{theory[mapping[stat]]!r}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(report.to_json(), args.out)
    return EXIT_OK


def _cmd_table(args):
    engines = tuple(args.engines.split(",")) if args.engines else None
    rows = tables.reproduce_table(
        args.id, seed=args.seed, n_socp=args.n_socp, n_genie=args.n_genie,
        trials_socp=args.trials_socp, trials_genie=args.trials_genie,
        engines=engines, threads=args.threads)
    if args.format == "json":
        _emit(json.dumps(tables.rows_to_dict(rows, args.id, args.seed),
                         sort_keys=True, indent=2) + "\n", args.out)
    else:
        _emit(tables.rows_to_csv(rows), args.out)
    if any(row.error is not None for row in rows):
        return EXIT_DOMAIN
    if not all(row.passed for row in rows):
        return EXIT_CELLS
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="socprec",
                     description="Predict and measure noise-bounded l1 "
                                 "recovery error")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", parents=[], help="asymptotic prediction")
    _add_regime_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("contour", help="iso-error curves in the (alpha, beta) plane")
    p.add_argument("--rho", required=True, help="comma list of error-to-noise ratios")
    p.add_argument("--beta-grid", required=True,
                   help="integer grid size, or comma list of beta values")
    p.add_argument("--beta-min", type=float, default=0.02)
    p.add_argument("--beta-max", type=float, default=0.6)
    p.add_argument("--mode", default="optimal-radius",
                   choices=("optimal-radius", "sqrt-alpha-radius", "both"))
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--signed", action="store_true")
    _add_output_flags(p, default_format="csv")
    p.set_defaults(func=_cmd_contour)

    for name, engines, blurb in (
            ("genie", ("genie",), "Monte Carlo over the dual oracle"),
            ("simulate", ("socp",), "Monte Carlo over the convex solver")):
        p = sub.add_parser(name, help=blurb)
        _add_regime_flags(p)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--trials", type=int, required=True)
        p.add_argument("--seed", type=int, required=True,
                       help="required: runs must be reproducible")
        p.add_argument("--spike", type=float, default=None,
                       help="nonzero signal amplitude (default 40/sqrt(n))")
        p.add_argument("--threads", type=int, default=None)
        _add_output_flags(p)
        p.set_defaults(func=lambda a, e=engines: _cmd_run(a, e))
    # simulate may also run both engines side by side
    p.add_argument("--engines", default=None,
                   help="comma subset of socp,genie (default socp)")

    def _simulate(a):
        engines = tuple(a.engines.split(",")) if a.engines else ("socp",)
        return _cmd_run(a, engines)

    p.set_defaults(func=_simulate)

    p = sub.add_parser("table", help="reproduce one benchmark table")
    p.add_argument("--id", type=int, required=True, choices=range(1, 9))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n-socp", type=int, default=None)
    p.add_argument("--n-genie", type=int, default=None)
    p.add_argument("--trials-socp", type=int, default=None)
    p.add_argument("--trials-genie", type=int, default=None)
    p.add_argument("--trials", type=int, default=None,
                   help="override both engines' trial counts")
    p.add_argument("--n", type=int, default=None,
                   help="override both engines' problem sizes")
    p.add_argument("--engines", default=None)
    p.add_argument("--threads", type=int, default=None)
    _add_output_flags(p, default_format="csv")
    p.set_defaults(func=_cmd_table)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "command", None) == "table":
        if args.n is not None:
            args.n_socp = args.n_socp or args.n
            args.n_genie = args.n_genie or args.n
        if args.trials is not None:
            args.trials_socp = args.trials_socp or args.trials
            args.trials_genie = args.trials_genie or args.trials
    try:
        return args.func(args)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except SocprecError as exc:
        log.error("%s", exc)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
