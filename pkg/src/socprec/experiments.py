"""Random instance generation and Monte Carlo orchestration.

A trial draws everything it needs from substreams keyed by (seed,
trial_index, stream), so identical configurations reproduce bit-identical
reports regardless of execution order.  The two measurement engines are the
convex solver (on full random instances) and the dual oracle (on its (g, h)
sample); either or both can run per configuration.
"""

import json
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from . import socp
from .errors import (AggregateError, DegenerateInstanceError, DomainError,
                     InfeasibleError, NumericalError)
from .genie import build_sorted, genie_solve
from .rng import TAG_DUAL_G, TAG_DUAL_H, TAG_MATRIX, TAG_NOISE, normal_matrix, normals
from .stats import MonteCarloStats, run_indexed_trials
from .theory import RecoveryRegime, TheoryPoint, optimal_radius, predict_generic

DEFAULT_SPIKE_SCALE = 40.0  # nonzero entries default to 40/sqrt(n)

ENGINES = ("socp", "genie")


@dataclass(frozen=True)
class RMode:
    """Constraint-radius policy: sqrt-m, opt, or scaled:<c> with c in (0, 1]."""

    kind: str
    c: float | None = None

    def __str__(self):
        return self.kind if self.kind != "scaled" else f"scaled:{self.c:g}"


def parse_r_mode(text) -> RMode:
    if isinstance(text, RMode):
        return text
    if text == "sqrt-m":
        return RMode("sqrt-m")
    if text == "opt":
        return RMode("opt")
    if isinstance(text, str) and text.startswith("scaled:"):
        try:
            c = float(text.split(":", 1)[1])
        except ValueError:
            raise DomainError(f"bad r-mode {text!r}") from None
        if not 0.0 < c <= 1.0:
            raise DomainError(f"scaled r-mode needs c in (0, 1], got {c}")
        return RMode("scaled", c)
    raise DomainError(f"unknown r-mode {text!r}")


def scaled_radius(mode: RMode, alpha, beta_w, sigma, signed) -> float:
    """r/sqrt(n) implied by the radius policy, for the asymptotic predictor."""
    if mode.kind == "sqrt-m":
        return sigma * sqrt(alpha)
    if mode.kind == "opt":
        return optimal_radius(alpha, beta_w, sigma, signed)
    return sigma * sqrt(mode.c * alpha)


@dataclass(frozen=True)
class ProblemInstance:
    """One random realization y = A x_tilde + v with its constraint radius."""

    A: np.ndarray
    x_tilde: np.ndarray
    v: np.ndarray
    y: np.ndarray
    r: float
    sigma: float
    seed_info: tuple

    @property
    def shape(self):
        return self.A.shape


def gen_instance(n, alpha, beta_w, sigma, spike, r_mode, signed,
                 seed, trial_index) -> ProblemInstance:
    """Deterministic instance for (seed, trial_index).

    The support sits on the last k coordinates with all nonzeros equal to
    `spike` (default 40/sqrt(n)); recovery performance is insensitive to the
    support location, and a fixed one keeps the bookkeeping trivial.
    """
    m = round(alpha * n)
    k = round(beta_w * n)
    if m < 1 or k < 1 or k >= n:
        raise DomainError(f"invalid dimensions: n={n} gives m={m}, k={k}")
    if sigma <= 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    mode = parse_r_mode(r_mode)
    if spike is None:
        spike = DEFAULT_SPIKE_SCALE / sqrt(n)
    if spike < 0.0:
        raise DomainError(f"spike must be nonnegative, got {spike}")

    A = normal_matrix(seed, trial_index, TAG_MATRIX, m, n)
    v = sigma * normals(seed, trial_index, TAG_NOISE, m)
    x_tilde = np.zeros(n)
    x_tilde[n - k:] = spike
    y = A @ x_tilde + v

    if mode.kind == "sqrt-m":
        r = sigma * sqrt(m)
    elif mode.kind == "opt":
        r = sqrt(n) * optimal_radius(alpha, beta_w, sigma, signed)
    else:
        r = sigma * sqrt(mode.c * m)
    return ProblemInstance(A=A, x_tilde=x_tilde, v=v, y=y, r=float(r),
                           sigma=float(sigma), seed_info=(seed, trial_index))


@dataclass(frozen=True)
class RunConfig:
    """One Monte Carlo run: a regime, a size, and the engines to apply."""

    alpha: float
    beta_w: float
    n: int
    trials: int
    seed: int
    sigma: float = 1.0
    r_mode: str = "sqrt-m"
    signed: bool = False
    engines: tuple = ENGINES
    spike: float | None = None
    threads: int | None = None
    keep_per_trial: bool = False

    def regime(self) -> RecoveryRegime:
        mode = parse_r_mode(self.r_mode)
        return RecoveryRegime(
            alpha=self.alpha, beta_w=self.beta_w, sigma=self.sigma,
            r_sc=scaled_radius(mode, self.alpha, self.beta_w, self.sigma, self.signed),
            signed=self.signed)


@dataclass
class ExperimentReport:
    """Aggregated Monte Carlo statistics next to the matching theory column."""

    regime: RecoveryRegime
    n: int
    trials: int
    seed: int
    empirical: dict           # stat name -> (mean, stderr)
    theory: TheoryPoint
    failures: dict            # {"count": int, "reasons": {name: count}}
    per_trial: list | None = field(default=None, repr=False)

    def to_dict(self):
        return {
            "regime": {
                "alpha": self.regime.alpha,
                "beta_w": self.regime.beta_w,
                "sigma": self.regime.sigma,
                "r_sc": self.regime.r_sc,
                "signed": self.regime.signed,
            },
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "empirical": {
                name: {"mean": mean, "stderr": stderr}
                for name, (mean, stderr) in sorted(self.empirical.items())
            },
            "theory": self.theory.to_dict(),
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def run_trials(config: RunConfig) -> ExperimentReport:
    """Run the configured engines over fresh instances and aggregate.

    Solver non-convergence and degenerate dual instances are counted under
    failures and excluded from the means; more than 10% failures raises.
    """
    engines = tuple(config.engines)
    if not engines or any(e not in ENGINES for e in engines):
        raise DomainError(f"engines must be a nonempty subset of {ENGINES}")
    if config.trials <= 0:
        raise DomainError(f"trials must be positive, got {config.trials}")

    regime = config.regime()
    theory = predict_generic(regime)
    n = config.n
    m = round(config.alpha * n)
    k = round(config.beta_w * n)
    if m < 1 or k < 1 or k >= n:
        raise DomainError(f"invalid dimensions: n={n} gives m={m}, k={k}")
    sqrt_n = sqrt(n)
    genie_r = regime.r_sc * sqrt_n

    def one_trial(idx):
        rec = {}
        if "genie" in engines:
            h = normals(config.seed, idx, TAG_DUAL_H, n)
            g = normals(config.seed, idx, TAG_DUAL_G, m)
            sol = genie_solve(build_sorted(h, g, k, config.signed),
                              config.sigma, genie_r)
            rec["nu_gen"] = sol.nu_gen
            rec["w_norm_genie"] = sol.w_norm
            rec["xi_over_sqrt_n"] = sol.xi_value / sqrt_n
        if "socp" in engines:
            inst = gen_instance(n, config.alpha, config.beta_w, config.sigma,
                                config.spike, config.r_mode, config.signed,
                                config.seed, idx)
            sol = socp.solve_socp(inst.A, inst.y, inst.r, signed=config.signed,
                                  x_tilde=inst.x_tilde)
            if not sol.converged:
                raise NumericalError(f"solver hit iteration cap on trial {idx}")
            rec["w_norm_socp"] = float(np.linalg.norm(sol.w))
            rec["neg_fobj_over_sqrt_n"] = -sol.f_obj / sqrt_n
        return rec

    stats = run_indexed_trials(
        one_trial, config.trials, threads=config.threads,
        recoverable=(DegenerateInstanceError, NumericalError, InfeasibleError),
        keep_per_trial=config.keep_per_trial)
    return _to_report(config, regime, theory, stats)


def _to_report(config, regime, theory, stats: MonteCarloStats) -> ExperimentReport:
    empirical = {name: (stats.means[name], stats.stderrs[name])
                 for name in stats.means}
    return ExperimentReport(
        regime=regime, n=config.n, trials=config.trials, seed=config.seed,
        empirical=empirical, theory=theory,
        failures={"count": stats.failure_count,
                  "reasons": dict(sorted(stats.failure_reasons.items()))},
        per_trial=stats.per_trial)


__all__ = [
    "AggregateError", "ExperimentReport", "ProblemInstance", "RMode",
    "RunConfig", "gen_instance", "parse_r_mode", "run_trials", "scaled_radius",
]
