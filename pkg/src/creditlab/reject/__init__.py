"""Reject-inference laboratory: simulated accept/reject policies, inference
strategies over the rejected population, and unbiased evaluation."""

from .evaluate import (
    DEFAULT_BAD_RATE_BUDGET,
    StrategyReport,
    STRATEGY_NAMES,
    baseline_training_set,
    evaluate_ri,
    standard_strategies,
)
from .scenario import (
    POLICY_THRESHOLD_DEFAULT,
    RejectScenario,
    partition_features,
    simulate_rejection,
)
from .strategies import (
    ACCEPTED,
    REJECT_DUP_BAD,
    REJECT_DUP_GOOD,
    REJECT_INFERRED,
    AcceptanceModel,
    AugmentedTrainingSet,
    GraphConfig,
    SpreadResult,
    acceptance_model,
    augment_downward,
    augment_fuzzy,
    augment_soft_cutoff,
    augment_upward,
    extrapolate,
    label_spreading,
    spread_training_set,
)

__all__ = [
    "DEFAULT_BAD_RATE_BUDGET",
    "StrategyReport",
    "baseline_training_set",
    "evaluate_ri",
    "POLICY_THRESHOLD_DEFAULT",
    "RejectScenario",
    "partition_features",
    "simulate_rejection",
    "ACCEPTED",
    "REJECT_DUP_BAD",
    "REJECT_DUP_GOOD",
    "REJECT_INFERRED",
    "AcceptanceModel",
    "AugmentedTrainingSet",
    "GraphConfig",
    "SpreadResult",
    "acceptance_model",
    "augment_downward",
    "augment_fuzzy",
    "augment_soft_cutoff",
    "augment_upward",
    "extrapolate",
    "label_spreading",
    "spread_training_set",
]
