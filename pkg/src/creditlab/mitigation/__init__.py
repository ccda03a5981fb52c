"""Bias mitigation: preprocessing weights, in-training constraints, and
post-processing thresholds."""

from .constrained import ConstraintSpec, constraint_direction, fit_constrained_logistic
from .fairgbm import GroupRateConstraint, fit_fairgbm
from .objective import (
    DEFAULT_FAIRNESS_BUDGET,
    DEFAULT_PENALTY_SCALE,
    TrialResult,
    TuneResult,
    fairness_objective,
    tune,
)
from .reweigh import ReweighTable, reweigh
from .threshold import (
    GroupThresholds,
    ThresholdPolicy,
    apply_threshold_policy,
    fit_threshold_optimizer,
)

__all__ = [
    "ConstraintSpec",
    "constraint_direction",
    "fit_constrained_logistic",
    "GroupRateConstraint",
    "fit_fairgbm",
    "DEFAULT_FAIRNESS_BUDGET",
    "DEFAULT_PENALTY_SCALE",
    "TrialResult",
    "TuneResult",
    "fairness_objective",
    "tune",
    "ReweighTable",
    "reweigh",
    "GroupThresholds",
    "ThresholdPolicy",
    "apply_threshold_policy",
    "fit_threshold_optimizer",
]
