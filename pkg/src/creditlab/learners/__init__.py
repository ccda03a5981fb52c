from .base import Predictor, canonical_order, predict_proba_batch
from .boosting import BoostConfig, BoostConstraint, BoostModel, fit_boost
from .forest import ForestConfig, ForestModel, fit_forest
from .logistic import LogisticModel, fit_logistic, sigmoid
from .serialize import load_model, model_from_dict, model_to_dict, save_model
from .tree import TreeConfig, TreeModel, bin_matrix, fit_tree

__all__ = [
    "Predictor",
    "predict_proba_batch",
    "canonical_order",
    "LogisticModel",
    "fit_logistic",
    "sigmoid",
    "TreeConfig",
    "TreeModel",
    "fit_tree",
    "bin_matrix",
    "ForestConfig",
    "ForestModel",
    "fit_forest",
    "BoostConfig",
    "BoostModel",
    "BoostConstraint",
    "fit_boost",
    "load_model",
    "save_model",
    "model_to_dict",
    "model_from_dict",
]
