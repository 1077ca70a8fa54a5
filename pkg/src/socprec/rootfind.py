"""Bracketed scalar root finding.

Bisection guarantees progress, a secant step accelerates it; the combination
is enough for the smooth monotone-ish residuals this package solves.  A grid
scan locates brackets first so multiple sign changes can be detected and
reported instead of silently picking an arbitrary root.
"""

import logging
import math

import numpy as np

from .errors import RootBracketError

log = logging.getLogger(__name__)

SCAN_POINTS = 512


def scan_sign_changes(f, lo, hi, points=SCAN_POINTS):
    """Evaluate f on a uniform grid and return (grid, values, brackets).

    NaN values (f undefined there) break the grid into segments; a bracket is
    any adjacent finite pair with opposite signs, or an exact zero.
    """
    grid = np.linspace(lo, hi, points)
    vals = np.array([f(x) for x in grid], dtype=float)
    brackets = []
    for i in range(points - 1):
        a, b = vals[i], vals[i + 1]
        if math.isnan(a) or math.isnan(b):
            continue
        if a == 0.0:
            brackets.append((grid[i], grid[i]))
        elif a * b < 0.0:
            brackets.append((grid[i], grid[i + 1]))
    if not math.isnan(vals[-1]) and vals[-1] == 0.0:
        brackets.append((grid[-1], grid[-1]))
    return grid, vals, brackets


def refine(f, lo, hi, ftol=1e-13, xtol=5e-16, max_iter=200):
    """Root of f on [lo, hi] given f(lo), f(hi) of opposite sign.

    Alternates secant and bisection; returns once |f| <= ftol or the bracket
    collapses to relative width xtol.
    """
    lo, hi = float(lo), float(hi)
    if lo == hi:
        return lo
    fa, fb = f(lo), f(hi)
    if fa == 0.0:
        return lo
    if fb == 0.0:
        return hi
    if fa * fb > 0:
        raise RootBracketError(f"no sign change on [{lo}, {hi}]: f={fa}, {fb}")
    a, b = lo, hi
    for _ in range(max_iter):
        # secant proposal, fall back to midpoint if it leaves the bracket
        if fb != fa:
            x = b - fb * (b - a) / (fb - fa)
        else:
            x = 0.5 * (a + b)
        mid = 0.5 * (a + b)
        if not (min(a, b) < x < max(a, b)):
            x = mid
        fx = f(x)
        if math.isnan(fx):
            x = mid
            fx = f(x)
        if abs(fx) <= ftol:
            return x
        if fa * fx < 0:
            b, fb = x, fx
        else:
            a, fa = x, fx
        if abs(b - a) <= xtol * max(1.0, abs(a), abs(b)):
            return 0.5 * (a + b)
    return 0.5 * (a + b)


def first_root(f, lo, hi, ftol=1e-13, points=SCAN_POINTS, what="residual"):
    """Smallest root of f on [lo, hi]; reports when several brackets exist."""
    grid, vals, brackets = scan_sign_changes(f, lo, hi, points)
    if not brackets:
        raise RootBracketError(
            f"no sign change found for {what} on [{lo:.6g}, {hi:.6g}]",
            grid=grid,
            residuals=vals,
        )
    if len(brackets) > 1:
        log.warning("%s: %d sign changes on [%g, %g]; taking the smallest root",
                    what, len(brackets), lo, hi)
    a, b = brackets[0]
    return refine(f, a, b, ftol=ftol)
