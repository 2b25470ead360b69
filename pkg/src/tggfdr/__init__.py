"""Simulation and rate theory for FDR control in the sparse tail generalized Gaussian model."""

from ._validation import DomainError, InfeasibleError
from .instance import Dataset, ProblemConfig, from_pi1, generate, make_config
from .metrics import RiskEstimate, TrialMetrics, estimate_risk, trial_metrics
from .procedures import (
    BarberCandes,
    BenjaminiHochberg,
    FixedThreshold,
    ProcedureOutcome,
    TrialCounts,
    bc_fdp_hat,
    bc_threshold,
    bh_fdp_hat,
    bh_threshold,
    fixed_threshold,
)
from .tgg import DistributionSpec, inverse_survival, log_survival, sample, survival
from .theory import TheoryParams, rate_report, solve_kappa_star

__version__ = "0.1.0"

__all__ = [
    "BarberCandes",
    "BenjaminiHochberg",
    "Dataset",
    "DistributionSpec",
    "DomainError",
    "FixedThreshold",
    "InfeasibleError",
    "ProblemConfig",
    "ProcedureOutcome",
    "RiskEstimate",
    "TheoryParams",
    "TrialCounts",
    "TrialMetrics",
    "bc_fdp_hat",
    "bc_threshold",
    "bh_fdp_hat",
    "bh_threshold",
    "estimate_risk",
    "fixed_threshold",
    "from_pi1",
    "generate",
    "inverse_survival",
    "log_survival",
    "make_config",
    "rate_report",
    "sample",
    "solve_kappa_star",
    "survival",
    "trial_metrics",
]
