"""Asymptotic performance predictions for noise-bounded l1 recovery.

Everything here is deterministic.  Given the scaled problem description
(undersampling ratio alpha, sparsity ratio beta_w, noise level sigma, scaled
constraint radius r_sc), the module computes:

  * the weak recovery threshold alpha_w(beta_w) for plain and sign-constrained
    l1 minimization,
  * the concentrating points of the dual solution of the worst-case ("large
    spike") recovery program: the clipping fraction theta_hat, the dual scalar
    nu_gen, the error norm w_norm, and the scaled objective limit,
  * the error-optimal constraint radius and the iso-error contour curves in
    the (alpha, beta_w) plane.

The scalar coefficient functions are truncated-Gaussian moments: with
q(theta) the magnitude quantile at which the smallest dual coordinates stop
being clipped, d is the mean energy of the surviving tail plus the spike
block, and c is its mean overlap with the sign pattern.  The dual scalar
solves a quadratic whose coefficients are these moments; only the minus root
is a maximizer.
"""

from dataclasses import dataclass
from math import exp, isnan, pi, sqrt

from . import rootfind
from .errors import DomainError, NumericalError, RegimeError
from .special import inverse_erf

EDGE = 1e-9          # open-interval clamp for quantile arguments
DISC_TOL = 1e-12     # discriminant values in (-DISC_TOL, 0) clamp to 0
DEGENERATE_QUAD = 1e-12
THETA_RESIDUAL_TOL = 1e-10
THRESHOLD_RESIDUAL_TOL = 1e-13

_SQRT2 = sqrt(2.0)


@dataclass(frozen=True)
class RecoveryRegime:
    """Scaled description of one recovery problem family.

    alpha  : measurements per unknown, m/n, in (0, 1]
    beta_w : nonzeros per unknown, k/n, in (0, alpha)
    sigma  : noise standard deviation
    r_sc   : constraint radius divided by sqrt(n)
    signed : True when the solver may assume nonnegative signals
    """

    alpha: float
    beta_w: float
    sigma: float
    r_sc: float
    signed: bool = False

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"alpha must be in (0, 1], got {self.alpha}")
        if not (0.0 < self.beta_w < self.alpha):
            raise DomainError(
                f"beta_w must be in (0, alpha={self.alpha}), got {self.beta_w}")
        if not self.sigma > 0.0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not self.r_sc > 0.0:
            raise DomainError(f"r_sc must be positive, got {self.r_sc}")


@dataclass(frozen=True)
class ScalarCoefficients:
    """The five scalar functions of theta entering the dual quadratic.

    a, b  : slope and offset of the stationarity line, a = sigma*(alpha-d)/r_sc
            and b = sigma*c/r_sc
    c     : mean overlap of the surviving dual tail with the sign pattern
    d     : mean energy of the surviving dual tail (spike block included)
    f     : clip quantile, sqrt(2)*erfinv of the surviving fraction
    """

    a: float
    b: float
    c: float
    d: float
    f: float
    theta: float


@dataclass(frozen=True)
class TheoryPoint:
    """Concentrating points of the worst-case recovery error for a regime."""

    regime: RecoveryRegime
    theta_hat: float
    nu_gen: float
    w_norm: float
    xi_prim_limit: float
    alpha_w: float
    r_opt_sc: float

    def to_dict(self):
        return {
            "alpha": self.regime.alpha,
            "beta_w": self.regime.beta_w,
            "sigma": self.regime.sigma,
            "r_sc": self.regime.r_sc,
            "signed": self.regime.signed,
            "theta_hat": self.theta_hat,
            "nu_gen": self.nu_gen,
            "w_norm": self.w_norm,
            "xi_prim_limit": self.xi_prim_limit,
            "neg_xi_prim_limit": -self.xi_prim_limit,
            "alpha_w": self.alpha_w,
            "r_opt_sc": self.r_opt_sc,
        }


@dataclass(frozen=True)
class ContourPoint:
    rho: float
    beta_w: float
    alpha: float
    mode: str
    ok: bool


def _tail_moments(theta, beta_w, signed):
    """(c, d, f) at theta: overlap, energy and quantile of the surviving tail.

    General signals clip by magnitude, so the quantile argument is the
    two-sided surviving fraction; signed signals clip raw values, one-sided.
    """
    frac = (1.0 - theta) / (1.0 - beta_w)
    if signed:
        t = inverse_erf(min(2.0 * frac - 1.0, 1.0 - 1e-16))
        c = (1.0 - beta_w) * sqrt(1.0 / (2.0 * pi)) * exp(-t * t)
        d = theta + (1.0 - beta_w) * (t / sqrt(pi)) * exp(-t * t)
    else:
        t = inverse_erf(min(frac, 1.0 - 1e-16))
        c = (1.0 - beta_w) * sqrt(2.0 / pi) * exp(-t * t)
        d = theta + (1.0 - beta_w) * (2.0 * t / sqrt(pi)) * exp(-t * t)
    return c, d, _SQRT2 * t


def scalar_coeffs(theta: float, regime: RecoveryRegime) -> ScalarCoefficients:
    """Evaluate the dual quadratic's scalar coefficients at theta.

    theta is accepted on the closed interval [beta_w, 1] and clamped just
    inside it; the quantile diverges at the endpoints.
    """
    if isnan(theta) or theta < regime.beta_w or theta > 1.0:
        raise DomainError(
            f"theta must be in [{regime.beta_w}, 1], got {theta}")
    theta = min(max(theta, regime.beta_w + EDGE), 1.0 - EDGE)
    c, d, f = _tail_moments(theta, regime.beta_w, regime.signed)
    a = regime.sigma * (regime.alpha - d) / regime.r_sc
    b = regime.sigma * c / regime.r_sc
    return ScalarCoefficients(a=a, b=b, c=c, d=d, f=f, theta=theta)


def _minus_root(coeffs: ScalarCoefficients, alpha: float, strict: bool = True):
    """Maximizing root of the dual quadratic, or NaN when it has none.

    With strict=True a discriminant below -DISC_TOL raises; the scan phase
    uses strict=False and treats NaN as "no root here".
    """
    den = coeffs.a ** 2 - alpha + coeffs.d
    q = coeffs.a * coeffs.b - coeffs.c
    const = coeffs.b ** 2 + coeffs.theta
    disc = q * q - const * den
    if disc < 0.0:
        if disc < -DISC_TOL:
            if strict:
                raise NumericalError(
                    f"negative discriminant {disc:.3e} at theta={coeffs.theta}")
            return float("nan")
        disc = 0.0
    if abs(den) < DEGENERATE_QUAD:
        # quadratic degenerates to a line; root of 2*q*nu + const = 0
        if q == 0.0:
            return float("nan")
        return -const / (2.0 * q)
    return (-q - sqrt(disc)) / den


def _threshold_residual(alpha_w, beta_w, signed):
    """Left-hand side of the weak-threshold characterization equation."""
    frac = (1.0 - alpha_w) / (1.0 - beta_w)
    if signed:
        t = inverse_erf(min(2.0 * frac - 1.0, 1.0 - 1e-16))
        lead = (1.0 - beta_w) * sqrt(1.0 / (2.0 * pi)) * exp(-t * t)
    else:
        t = inverse_erf(min(frac, 1.0 - 1e-16))
        lead = (1.0 - beta_w) * sqrt(2.0 / pi) * exp(-t * t)
    return lead / alpha_w - _SQRT2 * t


def l1_weak_threshold(beta_w: float, signed: bool) -> float:
    """Critical undersampling ratio alpha_w below which recovery fails.

    Root of the characterization equation in (beta_w, 1); the returned value
    satisfies |residual| < 1e-12.
    """
    if not (0.0 < beta_w < 1.0):
        raise DomainError(f"beta_w must be in (0, 1), got {beta_w}")
    lo = beta_w + EDGE  # quantile argument leaves [0, 1] below beta_w
    hi = 1.0 - EDGE
    return rootfind.first_root(
        lambda a: _threshold_residual(a, beta_w, signed),
        lo, hi, ftol=THRESHOLD_RESIDUAL_TOL, what="weak-threshold residual")


def threshold_beta(alpha_w: float, signed: bool) -> float:
    """Inverse of l1_weak_threshold: the beta_w whose threshold is alpha_w."""
    if not (0.0 < alpha_w < 1.0):
        raise DomainError(f"alpha_w must be in (0, 1), got {alpha_w}")
    return rootfind.first_root(
        lambda b: l1_weak_threshold(b, signed) - alpha_w,
        EDGE, alpha_w - EDGE, ftol=1e-13, points=128,
        what="threshold inversion")


def _require_below_threshold(regime: RecoveryRegime) -> float:
    alpha_w = l1_weak_threshold(regime.beta_w, regime.signed)
    if regime.alpha <= alpha_w:
        raise RegimeError(
            f"(alpha={regime.alpha}, beta_w={regime.beta_w}) is not below the "
            f"recoverability characterization (alpha_w={alpha_w:.6f})")
    return alpha_w


def _theta_residual(theta, regime):
    coeffs = scalar_coeffs(theta, regime)
    nu = _minus_root(coeffs, regime.alpha, strict=False)
    if isnan(nu):
        return float("nan")
    return coeffs.f * nu - 1.0


def solve_theta_hat(regime: RecoveryRegime) -> float:
    """Clipping fraction theta_hat at which the dual scalar is consistent.

    Solves f(theta) * nu(theta) = 1 on (beta_w, 1) by a 512-point scan plus
    bracketed refinement; several sign changes are reported and the smallest
    root is taken.
    """
    _require_below_threshold(regime)
    lo = regime.beta_w + EDGE
    hi = 1.0 - EDGE
    theta = rootfind.first_root(
        lambda t: _theta_residual(t, regime),
        lo, hi, ftol=THETA_RESIDUAL_TOL * 0.1, what="dual consistency residual")
    # strict re-evaluation: discriminant trouble inside the bracket is an error
    coeffs = scalar_coeffs(theta, regime)
    nu = _minus_root(coeffs, regime.alpha, strict=True)
    if abs(coeffs.f * nu - 1.0) > THETA_RESIDUAL_TOL:
        raise NumericalError(
            f"theta_hat residual {coeffs.f * nu - 1.0:.3e} above tolerance")
    return theta


def predict_generic(regime: RecoveryRegime) -> TheoryPoint:
    """Concentrating points of the worst-case recovery error for the regime."""
    alpha_w = _require_below_threshold(regime)
    theta = solve_theta_hat(regime)
    coeffs = scalar_coeffs(theta, regime)
    nu = _minus_root(coeffs, regime.alpha, strict=True)
    tail = nu * nu * coeffs.d - 2.0 * nu * coeffs.c + theta
    radicand = regime.alpha * nu * nu - tail
    if radicand <= 0.0:
        raise RegimeError(
            f"nonpositive radicand {radicand:.3e}: regime effectively above "
            "the characterization at this radius")
    w_norm = regime.sigma * sqrt(tail / radicand)
    xi_limit = regime.sigma * sqrt(radicand) - nu * regime.r_sc
    return TheoryPoint(
        regime=regime,
        theta_hat=theta,
        nu_gen=nu,
        w_norm=w_norm,
        xi_prim_limit=xi_limit,
        alpha_w=alpha_w,
        r_opt_sc=regime.sigma * sqrt(regime.alpha - alpha_w),
    )


def optimal_radius(alpha: float, beta_w: float, sigma: float, signed: bool) -> float:
    """Scaled radius minimizing the worst-case error norm.

    Equals sigma*sqrt(alpha - alpha_w); the induced prediction has zero
    objective limit and error norm sigma*sqrt(alpha_w / (alpha - alpha_w)).
    """
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    alpha_w = l1_weak_threshold(beta_w, signed)
    if alpha <= alpha_w:
        raise RegimeError(
            f"alpha={alpha} is at or below the characterization "
            f"alpha_w={alpha_w:.6f} for beta_w={beta_w}")
    return sigma * sqrt(alpha - alpha_w)


class RootBracketMiss(Exception):
    """Internal: contour target unreachable for one grid point."""


def contour(rho, beta_grid, mode, signed, sigma=1.0):
    """Iso-error curve in the (alpha, beta_w) plane for error-to-noise rho.

    mode "optimal-radius": each solver runs at its error-optimal radius and
    the curve inverts rho = sqrt(alpha_w / (alpha - alpha_w)) directly.
    mode "sqrt-alpha-radius": the solver runs at the statistical radius
    sigma*sqrt(alpha*n) instead, and alpha is root-found so the predicted
    error norm still equals sigma*rho.

    Unreachable grid points are returned flagged (ok=False), never fatal.
    """
    if mode not in ("optimal-radius", "sqrt-alpha-radius"):
        raise DomainError(f"unknown contour mode {mode!r}")
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    points = []
    for beta_w in beta_grid:
        if not (0.0 < beta_w < 1.0):
            raise DomainError(f"beta grid values must be in (0, 1), got {beta_w}")
        try:
            alpha = float(_contour_alpha(rho, beta_w, mode, signed, sigma))
            points.append(ContourPoint(rho, float(beta_w), alpha, mode, True))
        except (RegimeError, RootBracketMiss):
            points.append(ContourPoint(rho, beta_w, float("nan"), mode, False))
    return points


def _contour_alpha(rho, beta_w, mode, signed, sigma):
    alpha_w = l1_weak_threshold(beta_w, signed)
    alpha_opt = alpha_w * (1.0 + rho * rho) / (rho * rho)
    if alpha_opt > 1.0:
        raise RootBracketMiss
    if mode == "optimal-radius":
        return alpha_opt

    def gap(alpha):
        regime = RecoveryRegime(alpha=alpha, beta_w=beta_w, sigma=sigma,
                                r_sc=sigma * sqrt(alpha), signed=signed)
        return predict_generic(regime).w_norm - sigma * rho

    lo = alpha_opt + 1e-7
    hi = 1.0
    if lo >= hi:
        raise RootBracketMiss
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo <= 0.0:  # already at/below target at the optimal-radius alpha
        return lo
    if g_hi > 0.0:
        raise RootBracketMiss  # even alpha=1 cannot reach the target error
    return rootfind.refine(gap, lo, hi, ftol=1e-8)
