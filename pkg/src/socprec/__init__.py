"""socprec: predicted and measured error of noise-bounded l1 recovery.

The theory layer evaluates the asymptotic characterizations (weak thresholds,
worst-case error predictor, optimal radii, iso-error contours); the genie
layer solves the finite-n dual exactly for Gaussian samples; the socp layer
solves the recovery program itself; experiments ties them together into
reproducible Monte Carlo reports and benchmark tables.
"""

from .errors import (AggregateError, DegenerateInstanceError, DomainError,
                     InfeasibleError, NumericalError, RegimeError,
                     RootBracketError, SocprecError)
from .experiments import (ExperimentReport, ProblemInstance, RunConfig,
                          gen_instance, run_trials)
from .genie import (GenieSolution, SortedDualData, build_sorted,
                    genie_montecarlo, genie_objective, genie_solve)
from .socp import (OptimalityDiagnostics, SocpSolution,
                   optimality_diagnostics, reference_solve, solve_socp)
from .special import inverse_erf
from .tables import reproduce_table, table_spec
from .theory import (ContourPoint, RecoveryRegime, ScalarCoefficients,
                     TheoryPoint, contour, l1_weak_threshold, optimal_radius,
                     predict_generic, scalar_coeffs, solve_theta_hat,
                     threshold_beta)

__version__ = "0.1.0"

__all__ = [
    "AggregateError", "ContourPoint", "DegenerateInstanceError", "DomainError",
    "ExperimentReport", "GenieSolution", "InfeasibleError", "NumericalError",
    "OptimalityDiagnostics", "ProblemInstance", "RecoveryRegime", "RegimeError",
    "RootBracketError", "RunConfig", "ScalarCoefficients", "SocpSolution",
    "SocprecError", "SortedDualData", "TheoryPoint", "build_sorted", "contour",
    "gen_instance", "genie_montecarlo", "genie_objective", "genie_solve",
    "inverse_erf", "l1_weak_threshold", "optimal_radius",
    "optimality_diagnostics", "predict_generic", "reference_solve",
    "reproduce_table", "run_trials", "scalar_coeffs", "solve_socp",
    "solve_theta_hat", "table_spec", "threshold_beta",
]
