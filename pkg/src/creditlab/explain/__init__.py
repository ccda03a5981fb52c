"""Explainability engine: global importances, dependence curves, Shapley
attributions, local surrogates, and counterfactual generators, all operating
on the original feature scale through an opaque plan+model pipeline."""

from .attribution import EXACT_FEATURE_LIMIT, Attribution, shap_values
from .counterfactual import (
    Counterfactual,
    CounterfactualSet,
    build_action_grids,
    counterfactual_search,
    diverse_counterfactuals,
)
from .curves import CurveSet, ice, partial_dependence
from .importance import FeatureImportance, global_importance
from .pipeline import (
    Columns,
    ScoringPipeline,
    columns_from_table,
    n_rows,
    row_at,
    take_rows,
    tile_row,
)
from .surrogate import LimeSurrogate, lime_local

__all__ = [
    "EXACT_FEATURE_LIMIT",
    "Attribution",
    "shap_values",
    "Counterfactual",
    "CounterfactualSet",
    "build_action_grids",
    "counterfactual_search",
    "diverse_counterfactuals",
    "CurveSet",
    "ice",
    "partial_dependence",
    "FeatureImportance",
    "global_importance",
    "Columns",
    "ScoringPipeline",
    "columns_from_table",
    "n_rows",
    "row_at",
    "take_rows",
    "tile_row",
    "LimeSurrogate",
    "lime_local",
]
