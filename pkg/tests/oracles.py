"""Independent oracles used to freeze expected values.

Each oracle deliberately avoids the code path it checks: the dual oracle is
a dense grid over the scalar variable with multipliers clamped coordinatewise
(no candidate scan, no closed form), and the coefficient oracle integrates
truncated Gaussian moments numerically (no closed-form moment identities).
"""

import numpy as np
from scipy import integrate
from scipy.special import erfinv as sp_erfinv


def clamp_multipliers(nu, h_bar, n_free, signed):
    """Coordinatewise-optimal multipliers at a fixed dual scalar."""
    lam = np.zeros(h_bar.shape[0])
    raw = 1.0 - nu * h_bar[:n_free]
    if signed:
        lam[:n_free] = np.maximum(raw, 0.0)
    else:
        lam[:n_free] = np.clip(raw, 0.0, 1.0)
    return lam


def genie_grid_oracle(h_bar, z2, g_norm_sq, k, sigma, r, signed,
                      points=100_000, nu_top=10.0):
    """Max of the dual objective over a dense nu grid with clamped lam.

    Returns (best value, argmax nu), or (None, None) when no grid point is
    feasible (the radicand never goes positive).
    """
    n = h_bar.shape[0]
    n_free = n - k
    nus = np.linspace(nu_top / points, nu_top, points)
    raw = 1.0 - np.outer(nus, h_bar[:n_free])
    lam_free = np.maximum(raw, 0.0) if signed else np.clip(raw, 0.0, 1.0)
    resid_free = nus[:, None] * h_bar[:n_free] - z2[:n_free] + lam_free
    resid_tail = nus[:, None] * h_bar[n_free:] - z2[n_free:]
    resid_sq = np.einsum("ij,ij->i", resid_free, resid_free) \
        + np.einsum("ij,ij->i", resid_tail, resid_tail)
    radicand = g_norm_sq * nus * nus - resid_sq
    feasible = radicand > 0.0
    if not feasible.any():
        return None, None
    vals = np.full(points, -np.inf)
    vals[feasible] = sigma * np.sqrt(radicand[feasible]) - nus[feasible] * r
    i = int(np.argmax(vals))
    return float(vals[i]), float(nus[i])


def _phi(x):
    return np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)


def tail_energy_quadrature(theta, beta_w, signed):
    """Limit of the surviving tail's mean energy, by numerical integration."""
    frac = (1.0 - theta) / (1.0 - beta_w)
    if signed:
        q = np.sqrt(2.0) * float(sp_erfinv(2.0 * frac - 1.0))
        moment, _ = integrate.quad(lambda x: x * x * _phi(x), q, np.inf)
    else:
        q = np.sqrt(2.0) * float(sp_erfinv(frac))
        moment, _ = integrate.quad(lambda x: 2.0 * x * x * _phi(x), q, np.inf)
    return (1.0 - beta_w) * moment + beta_w


def tail_overlap_quadrature(theta, beta_w, signed):
    """Limit of the surviving tail's mean overlap with the sign pattern."""
    frac = (1.0 - theta) / (1.0 - beta_w)
    if signed:
        q = np.sqrt(2.0) * float(sp_erfinv(2.0 * frac - 1.0))
        moment, _ = integrate.quad(lambda x: x * _phi(x), q, np.inf)
    else:
        q = np.sqrt(2.0) * float(sp_erfinv(frac))
        moment, _ = integrate.quad(lambda x: 2.0 * x * _phi(x), q, np.inf)
    return (1.0 - beta_w) * moment
