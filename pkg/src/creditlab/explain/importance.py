"""Global feature importances, aggregated to original source features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..learners import BoostModel, ForestModel, LogisticModel, TreeModel
from .attribution import EXACT_FEATURE_LIMIT, shap_values
from .pipeline import Columns, ScoringPipeline, n_rows, row_at


@dataclass(frozen=True)
class FeatureImportance:
    name: str
    importance: float
    sign: float  # +1/-1 for signed kinds on numeric features, 0 otherwise


def _aggregate(plan, per_column: np.ndarray, signed: bool) -> list[FeatureImportance]:
    sources = plan.source_of_feature
    kinds = dict(plan.source_schema)
    out = {}
    for src in dict.fromkeys(sources):
        idx = [i for i, s in enumerate(sources) if s == src]
        vals = per_column[idx]
        if signed and kinds.get(src, "numeric") == "numeric" and len(idx) == 1:
            v = float(vals[0])
            out[src] = FeatureImportance(src, abs(v), float(np.sign(v)))
        else:
            out[src] = FeatureImportance(src, float(np.sum(np.abs(vals))), 0.0)
    return sorted(out.values(), key=lambda f: (-f.importance, f.name))


def global_importance(
    pipeline: ScoringPipeline,
    kind: str,
    background: Columns | None = None,
    mode: str = "auto",
    n_permutations: int = 30,
    seed: int = 0,
) -> list[FeatureImportance]:
    """Ranked per-source-feature importances.

    lr_coefficients: |beta| of a logistic model (signed for numeric sources);
    gbm_split_counts: how often tree ensembles split on each source;
    mean_abs_shap: mean absolute Shapley contribution over the background
    sample, on the thresholded-label scale so models with different score
    distributions stay comparable.
    """
    model = pipeline.model
    plan = pipeline.plan
    if kind == "lr_coefficients":
        if not isinstance(model, LogisticModel):
            raise DataError("lr_coefficients requires a logistic model")
        return _aggregate(plan, model.coefficients, signed=True)
    if kind == "gbm_split_counts":
        if not isinstance(model, (BoostModel, ForestModel, TreeModel)):
            raise DataError("gbm_split_counts requires a tree-based model")
        counts = model.split_feature_counts(len(plan.feature_names))
        return _aggregate(plan, counts.astype(np.float64), signed=False)
    if kind == "mean_abs_shap":
        if background is None or n_rows(background) == 0:
            raise DataError("mean_abs_shap requires a background sample")
        d = len(pipeline.feature_names)
        if mode == "auto":
            mode = "exact" if d <= EXACT_FEATURE_LIMIT else "permutation"
        m = n_rows(background)
        acc = np.zeros(d)
        for i in range(m):
            at = shap_values(pipeline, row_at(background, i), background,
                             mode=mode, n_permutations=n_permutations,
                             seed=seed + i, scale="label")
            acc += np.abs(at.contributions)
        acc /= m
        items = [FeatureImportance(n, float(v), 0.0)
                 for n, v in zip(pipeline.feature_names, acc)]
        return sorted(items, key=lambda f: (-f.importance, f.name))
    raise DataError(f"unknown importance kind {kind!r}")
