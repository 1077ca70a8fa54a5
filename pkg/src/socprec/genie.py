"""Exact finite-n solution of the worst-case dual program.

For one Gaussian sample (g, h) the worst-case recovery error is governed by

    max_{nu >= 0, lam in box}  sigma * sqrt(|g|^2 nu^2 - |nu*hbar - z2 + lam|^2) - nu*r

where hbar is h with its free block replaced by sorted magnitudes (sorted raw
values in signed mode) and z2 is +1 on the free block, -1 on the spike block.
At the maximizer the multipliers lam zero the first c coordinates of the
residual and vanish on the rest, so the problem collapses to a scalar
quadratic per candidate c.  The scan over c runs in O(n) on suffix tables.

This is both a Monte Carlo estimator of the asymptotic theory and an
independent finite-n oracle for the convex solver.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInstanceError, DomainError, NumericalError
from .rng import TAG_DUAL_G, TAG_DUAL_H, normals
from .stats import MonteCarloStats, run_indexed_trials

SANDWICH_TOL = 1e-9


@dataclass(frozen=True)
class SortedDualData:
    """Sorted dual sample with suffix tables for O(1) candidate evaluation.

    h_bar      : length n; first n-k entries are magnitudes (general) or raw
                 values (signed) of h's free block sorted ascending, last k
                 entries are h's spike block untouched
    z2         : +1 on the free block, -1 on the spike block
    suffix_sq  : suffix_sq[c] = sum(h_bar[c:]**2), length n+1
    suffix_hz  : suffix sums of h_bar * z2, length n+1
    """

    h_bar: np.ndarray
    z2: np.ndarray
    k: int
    g_norm_sq: float
    suffix_sq: np.ndarray
    suffix_hz: np.ndarray
    signed: bool

    @property
    def n(self) -> int:
        return self.h_bar.shape[0]


@dataclass(frozen=True)
class GenieSolution:
    """Maximizer of the dual program for one sample.

    c_gen is the number of clipped multipliers; nu_gen the dual scalar;
    lam the assembled multiplier vector; w_norm the implied error norm;
    xi_value the optimal objective; a_gen/b_gen the stationarity-line
    coefficients at the accepted c_gen.
    """

    c_gen: int
    nu_gen: float
    lam: np.ndarray
    w_norm: float
    xi_value: float
    a_gen: float
    b_gen: float


def build_sorted(h, g, k: int, signed: bool) -> SortedDualData:
    """Sort the dual sample and precompute suffix tables.

    Ties are broken by original index (stable sort).
    """
    h = np.asarray(h, dtype=float)
    g = np.asarray(g, dtype=float)
    if h.ndim != 1 or g.ndim != 1:
        raise DomainError("h and g must be one-dimensional")
    n = h.shape[0]
    if not 0 <= k < n:
        raise DomainError(f"k must satisfy 0 <= k < n={n}, got {k}")
    head = h[: n - k]
    if signed:
        head = np.sort(head, kind="stable")
    else:
        head = np.sort(np.abs(head), kind="stable")
    h_bar = np.concatenate([head, h[n - k:]])
    z2 = np.ones(n)
    z2[n - k:] = -1.0
    suffix_sq = np.zeros(n + 1)
    suffix_sq[:n] = np.cumsum((h_bar * h_bar)[::-1])[::-1]
    suffix_hz = np.zeros(n + 1)
    suffix_hz[:n] = np.cumsum((h_bar * z2)[::-1])[::-1]
    return SortedDualData(
        h_bar=h_bar, z2=z2, k=int(k), g_norm_sq=float(g @ g),
        suffix_sq=suffix_sq, suffix_hz=suffix_hz, signed=signed)


def genie_solve(data: SortedDualData, sigma: float, r: float) -> GenieSolution:
    """Closed-form maximizer via the candidate scan.

    For each candidate clip count c the stationarity condition squares to a
    quadratic in nu whose minus root is the maximizer; c is accepted when the
    sandwich  h_bar[c]*nu <= 1 < h_bar[c+1]*nu  holds (largest such c wins).
    """
    if sigma <= 0.0 or r <= 0.0:
        raise DomainError("sigma and r must be positive")
    n, k = data.n, data.k
    nk = n - k
    g2 = data.g_norm_sq
    cs = np.arange(nk + 1)
    tail_sq = data.suffix_sq[cs]
    tail_hz = data.suffix_hz[cs]
    tail_len = n - cs

    a = sigma * (g2 - tail_sq) / r
    b = sigma * tail_hz / r
    den = a * a - g2 + tail_sq
    q = a * b - tail_hz
    disc = q * q - (b * b + tail_len) * den

    nu = np.full(nk + 1, np.nan)
    usable = (disc >= -1e-12) & (np.abs(den) > 1e-300)
    with np.errstate(invalid="ignore"):
        nu[usable] = (-q[usable] - np.sqrt(np.maximum(disc[usable], 0.0))) / den[usable]

    # sandwich: boundary candidates c=0 and c=n-k are both legal
    edge_lo = np.concatenate([[-np.inf], data.h_bar[:nk]])   # h_bar[c]
    edge_hi = np.concatenate([data.h_bar[:nk], [np.inf]])    # h_bar[c+1]
    with np.errstate(invalid="ignore"):
        ok = (
            usable
            & (nu > 0.0)
            & (edge_lo * nu <= 1.0 + SANDWICH_TOL)
            & (edge_hi * nu > 1.0 - SANDWICH_TOL)
            # stationarity requires a positive derivative numerator
            & (a * nu + b > 0.0)
        )
    candidates = np.flatnonzero(ok)
    if candidates.size == 0:
        raise DegenerateInstanceError(
            "no clip count satisfies the sandwich condition; instance discarded "
            f"(n={n}, k={k}, usable quadratics: {int(usable.sum())})")
    c = int(candidates[-1])

    nu_c = float(nu[c])
    resid_sq = nu_c * nu_c * tail_sq[c] - 2.0 * nu_c * tail_hz[c] + tail_len[c]
    radicand = g2 * nu_c * nu_c - resid_sq
    if radicand <= 0.0:
        raise NumericalError(
            f"negative radicand {radicand:.3e} at accepted clip count {c}: "
            "sample effectively above the characterization")

    lam = np.zeros(n)
    lam[:c] = 1.0 - nu_c * data.h_bar[:c]
    if not data.signed:
        np.clip(lam[:c], 0.0, 1.0, out=lam[:c])
    else:
        np.maximum(lam[:c], 0.0, out=lam[:c])

    return GenieSolution(
        c_gen=c,
        nu_gen=nu_c,
        lam=lam,
        w_norm=sigma * float(np.sqrt(resid_sq / radicand)),
        xi_value=sigma * float(np.sqrt(radicand)) - nu_c * r,
        a_gen=float(a[c]),
        b_gen=float(b[c]),
    )


def genie_objective(data: SortedDualData, nu: float, lam, sigma: float, r: float) -> float:
    """Direct evaluation of the dual objective at (nu, lam)."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (data.n,):
        raise DomainError(f"lam must have shape ({data.n},)")
    resid = nu * data.h_bar - data.z2 + lam
    radicand = data.g_norm_sq * nu * nu - float(resid @ resid)
    if radicand <= 0.0:
        raise NumericalError(f"objective undefined: radicand {radicand:.3e} <= 0")
    return sigma * float(np.sqrt(radicand)) - nu * r


def genie_montecarlo(regime, n: int, trials: int, seed: int,
                     threads: int | None = None) -> MonteCarloStats:
    """Sample means and standard errors of (nu_gen, w_norm, xi/sqrt(n)).

    Each trial draws fresh (g, h) from its own substream; degenerate
    instances are counted under failures and excluded from the means.
    Deterministic for a fixed seed, independent of thread count.
    """
    m = round(regime.alpha * n)
    k = round(regime.beta_w * n)
    if m < 1 or k < 1 or k >= n:
        raise DomainError(f"n={n} too small for regime (m={m}, k={k})")
    r = regime.r_sc * np.sqrt(n)
    sqrt_n = np.sqrt(n)

    def one_trial(idx):
        h = normals(seed, idx, TAG_DUAL_H, n)
        g = normals(seed, idx, TAG_DUAL_G, m)
        sol = genie_solve(build_sorted(h, g, k, regime.signed), regime.sigma, r)
        return {
            "nu_gen": sol.nu_gen,
            "w_norm_genie": sol.w_norm,
            "xi_over_sqrt_n": sol.xi_value / sqrt_n,
        }

    return run_indexed_trials(
        one_trial, trials, threads=threads,
        recoverable=(DegenerateInstanceError, NumericalError))
