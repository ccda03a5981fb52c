"""Preprocessing plan + fitted model as one opaque scorer.

Explanations are computed in the original feature space; encoding,
imputation, and scaling happen inside this wrapper so no explainer ever
touches standardized or one-hot columns directly.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError
from ..tabular import PreprocessPlan, Table, transform_columns

Columns = dict[str, np.ndarray]


class ScoringPipeline:
    """Scores raw source columns through plan and model.

    `feature_names` lists the original-scale inputs (source columns, plus the
    sensitive column when the plan is group-aware); `kind_of` maps each to
    "numeric" or "categorical".
    """

    def __init__(self, plan: PreprocessPlan, model, threshold: float = 0.5):
        self.plan = plan
        self.model = model
        self.threshold = float(threshold)
        kinds = dict(plan.source_schema)
        if plan.sensitive_name is not None:
            kinds[plan.sensitive_name] = "numeric"
        self.kind_of = kinds
        self.feature_names = tuple(kinds)

    def _check(self, columns: Columns) -> Columns:
        missing = [n for n in self.feature_names if n not in columns]
        if missing:
            raise DataError(f"missing source columns {missing}")
        return columns

    def predict_proba(self, columns: Columns) -> np.ndarray:
        X = transform_columns(self.plan, self._check(columns))
        return self.model.predict_proba(X)

    def predict_label(self, columns: Columns) -> np.ndarray:
        return (self.predict_proba(columns) >= self.threshold).astype(np.float64)

    def predict(self, columns: Columns, scale: str = "probability") -> np.ndarray:
        if scale == "probability":
            return self.predict_proba(columns)
        if scale == "label":
            return self.predict_label(columns)
        if scale == "margin":
            X = transform_columns(self.plan, self._check(columns))
            margin = getattr(self.model, "decision_margin", None)
            if margin is None:
                raise DataError("model does not expose a margin scale")
            return margin(X)
        raise DataError(f"unknown prediction scale {scale!r}")


def columns_from_table(pipeline: ScoringPipeline, t: Table) -> Columns:
    return {name: t.columns[name] for name in pipeline.feature_names}


def row_at(columns: Columns, i: int) -> dict:
    return {name: col[i] for name, col in columns.items()}


def tile_row(row: dict, n: int) -> Columns:
    out: Columns = {}
    for name, value in row.items():
        if isinstance(value, str) or value is None:
            col = np.empty(n, dtype=object)
            col[:] = value
            out[name] = col
        else:
            out[name] = np.full(n, value, dtype=np.float64)
    return out


def n_rows(columns: Columns) -> int:
    return len(next(iter(columns.values())))


def take_rows(columns: Columns, idx: np.ndarray) -> Columns:
    return {name: col[idx] for name, col in columns.items()}
