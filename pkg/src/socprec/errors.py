"""Semantic exception hierarchy.

Every failure mode callers are expected to branch on gets its own class;
plain ValueError is reserved for programming errors caught at the boundary.
"""


class SocprecError(Exception):
    """Base class for all package errors."""


class DomainError(SocprecError, ValueError):
    """Inputs outside the documented domain (bad shapes, ranges, flags)."""


class RegimeError(SocprecError):
    """Problem regime at or above the recoverability characterization."""


class RootBracketError(SocprecError):
    """Scalar root finding could not bracket a sign change.

    Carries the scanned residual profile for diagnosis.
    """

    def __init__(self, message, grid=None, residuals=None):
        super().__init__(message)
        self.grid = grid
        self.residuals = residuals


class NumericalError(SocprecError):
    """A numerical invariant failed beyond tolerance (e.g. negative discriminant)."""


class DegenerateInstanceError(SocprecError):
    """A random instance admits no consistent dual solution; the trial is discarded."""


class InfeasibleError(SocprecError):
    """The optimization problem has no feasible point (signed mode only)."""


class AggregateError(SocprecError):
    """Too many per-trial failures for the aggregate statistics to be trusted."""
