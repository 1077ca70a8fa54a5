"""Ordered Monte Carlo trial execution and aggregation.

Trials are independent work units; they may run on a thread pool, but results
are always reduced in trial-index order so parallel and serial runs produce
identical statistics.  Per-trial failures of recoverable type are counted and
excluded from the means; more than 10% failures invalidates the aggregate.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import AggregateError, DomainError

THREADS_ENV = "SOCPREC_THREADS"
MAX_FAILURE_FRACTION = 0.10


def thread_count(override=None) -> int:
    if override is not None:
        return max(1, int(override))
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return 1


@dataclass
class MonteCarloStats:
    """Means and standard errors of named per-trial statistics."""

    means: dict
    stderrs: dict
    trials: int
    kept: int
    failure_count: int
    failure_reasons: dict
    per_trial: list | None = field(default=None, repr=False)

    def to_dict(self):
        return {
            "empirical": {
                name: {"mean": self.means[name], "stderr": self.stderrs[name]}
                for name in sorted(self.means)
            },
            "failures": {"count": self.failure_count,
                         "reasons": dict(sorted(self.failure_reasons.items()))},
            "trials": self.trials,
            "kept": self.kept,
        }


def run_indexed_trials(trial_fn, trials: int, threads=None, recoverable=(),
                       keep_per_trial: bool = False) -> MonteCarloStats:
    """Run trial_fn(i) for i in range(trials) and aggregate its stat dicts.

    trial_fn returns {stat_name: float}; raising one of `recoverable` marks
    the trial failed (counted by exception class name, excluded from means).
    """
    if trials <= 0:
        raise DomainError(f"trials must be positive, got {trials}")

    def guarded(i):
        try:
            return trial_fn(i)
        except recoverable as exc:
            return exc

    workers = thread_count(threads)
    if workers == 1:
        outcomes = [guarded(i) for i in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(guarded, range(trials)))

    records = []
    reasons = {}
    for out in outcomes:
        if isinstance(out, Exception):
            name = type(out).__name__
            reasons[name] = reasons.get(name, 0) + 1
        else:
            records.append(out)
    failures = trials - len(records)
    if failures > MAX_FAILURE_FRACTION * trials:
        raise AggregateError(
            f"{failures}/{trials} trials failed ({reasons}); "
            "aggregate statistics would be unreliable")
    if not records:
        raise AggregateError("all trials failed")

    names = records[0].keys()
    means, stderrs = {}, {}
    for name in names:
        vals = np.array([rec[name] for rec in records])
        means[name] = float(vals.mean())
        stderrs[name] = float(vals.std(ddof=1) / np.sqrt(vals.size)) if vals.size > 1 else 0.0
    return MonteCarloStats(
        means=means, stderrs=stderrs, trials=trials, kept=len(records),
        failure_count=failures, failure_reasons=reasons,
        per_trial=records if keep_per_trial else None)
