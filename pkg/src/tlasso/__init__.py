"""Two-anchor L1 regression: penalized fits that shrink toward both zero and
an initial estimate, with coordinate descent, regularization paths,
cross-validation, theory verification suites, and drift experiment runners.
"""

__version__ = "0.1.0"

from .cv import CvResult, CvSpec, cross_validate, kfold_split
from .data import Coefficients, Dataset, Standardizer, destandardize, load_csv, standardize
from .experiments import (
    DriftScenario,
    ExperimentReport,
    StepData,
    gen_abrupt,
    gen_classification_drift,
    gen_gradual,
    gen_transfer,
    run_classification_drift,
    run_concept_drift,
    run_transfer,
)
from .metrics import auc
from .path import (
    PathResult,
    PathSpec,
    fit_path,
    lambda_max,
    lambda_max_with_fallback,
    unchanged_solution_exists,
    zero_solution_exists,
)
from .solver import FitConfig, FitResult, PenaltySpec, cd_fit, kkt_check, objective
from .theory import (
    BoundInputs,
    SignCase,
    TheoryCase,
    bound_violation_experiment,
    brute_force_fit,
    error_bound,
    failure_probability,
    gre_proxy,
    screening_predicate,
    sign_recovery_exact,
    sign_recovery_sufficient,
    sign_unchanging_exact,
    sign_unchanging_sufficient,
    two_stage_bound,
)
from .thresholds import ThresholdParams, soft_threshold, transfer_threshold

__all__ = [
    "Coefficients",
    "CvResult",
    "CvSpec",
    "Dataset",
    "DriftScenario",
    "ExperimentReport",
    "FitConfig",
    "FitResult",
    "PathResult",
    "PathSpec",
    "PenaltySpec",
    "SignCase",
    "Standardizer",
    "StepData",
    "TheoryCase",
    "BoundInputs",
    "ThresholdParams",
    "auc",
    "bound_violation_experiment",
    "brute_force_fit",
    "cd_fit",
    "cross_validate",
    "destandardize",
    "error_bound",
    "failure_probability",
    "fit_path",
    "gen_abrupt",
    "gen_classification_drift",
    "gen_gradual",
    "gen_transfer",
    "gre_proxy",
    "kfold_split",
    "kkt_check",
    "lambda_max",
    "lambda_max_with_fallback",
    "load_csv",
    "objective",
    "run_classification_drift",
    "run_concept_drift",
    "run_transfer",
    "screening_predicate",
    "sign_recovery_exact",
    "sign_recovery_sufficient",
    "sign_unchanging_exact",
    "sign_unchanging_sufficient",
    "soft_threshold",
    "standardize",
    "transfer_threshold",
    "two_stage_bound",
    "zero_solution_exists",
    "unchanged_solution_exists",
]
