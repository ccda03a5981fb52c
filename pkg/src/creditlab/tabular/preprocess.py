"""Leakage-safe preprocessing: impute, standardize, one-hot encode.

All plan statistics come from the split the plan was fitted on; applying the
plan to any other split reuses those statistics untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from .schema import Table

OTHER = "OTHER"


@dataclass(frozen=True)
class NumericStats:
    impute: float  # median of non-missing fit values
    mean: float  # over imputed fit values
    std: float  # clamped to >= 1e-12


@dataclass(frozen=True)
class CategoricalStats:
    impute: str  # mode of non-missing fit values
    vocabulary: tuple[str, ...]  # categories seen at fit time; OTHER bucket appended at encode time


@dataclass(frozen=True)
class PreprocessPlan:
    source_schema: tuple[tuple[str, str], ...]  # (name, kind) for feature columns, in order
    numeric: dict[str, NumericStats]
    categorical: dict[str, CategoricalStats]
    sensitive_name: str | None  # appended as a trailing feature when aware
    fitted: bool = True

    @property
    def feature_names(self) -> tuple[str, ...]:
        names: list[str] = []
        for name, kind in self.source_schema:
            if kind == "numeric":
                names.append(name)
            else:
                vocab = self.categorical[name].vocabulary
                names.extend(f"{name}={v}" for v in (*vocab, OTHER))
        if self.sensitive_name is not None:
            names.append(self.sensitive_name)
        return tuple(names)

    @property
    def source_of_feature(self) -> tuple[str, ...]:
        """Source column for each encoded design-matrix column."""
        out: list[str] = []
        for name, kind in self.source_schema:
            if kind == "numeric":
                out.append(name)
            else:
                out.extend([name] * (len(self.categorical[name].vocabulary) + 1))
        if self.sensitive_name is not None:
            out.append(self.sensitive_name)
        return tuple(out)


def fit_preprocess(train: Table, include_sensitive: bool = False) -> PreprocessPlan:
    if train.n_rows == 0:
        raise DataError("cannot fit preprocessing on an empty table")
    numeric: dict[str, NumericStats] = {}
    categorical: dict[str, CategoricalStats] = {}
    schema: list[tuple[str, str]] = []
    for spec in train.feature_specs():
        col = train.columns[spec.name]
        schema.append((spec.name, spec.kind))
        if spec.kind == "numeric":
            finite = col[~np.isnan(col)]
            if finite.size == 0:
                raise DataError(f"numeric column {spec.name!r} is all-missing in the fit split")
            impute = float(np.median(finite))
            imputed = np.where(np.isnan(col), impute, col)
            std = max(float(np.std(imputed)), 1e-12)
            numeric[spec.name] = NumericStats(impute, float(np.mean(imputed)), std)
        else:
            present = [v for v in col if v is not None]
            if not present:
                raise DataError(f"categorical column {spec.name!r} is all-missing in the fit split")
            values, counts = np.unique(np.asarray(present, dtype=object), return_counts=True)
            mode = str(values[np.argmax(counts)])  # np.unique sorts, so ties pick the smallest
            categorical[spec.name] = CategoricalStats(mode, tuple(str(v) for v in values))
    sensitive = train.sensitive_name if include_sensitive else None
    return PreprocessPlan(tuple(schema), numeric, categorical, sensitive)


def transform_columns(plan: PreprocessPlan, columns: dict[str, np.ndarray]) -> np.ndarray:
    """Encode raw source columns (original scale) into the design matrix.

    ``columns`` must contain every source column of the plan, plus the
    sensitive column when the plan is group-aware.
    """
    n_rows = len(next(iter(columns.values())))
    blocks: list[np.ndarray] = []
    for name, kind in plan.source_schema:
        col = columns[name]
        if kind == "numeric":
            st = plan.numeric[name]
            col = np.asarray(col, dtype=np.float64)
            x = np.where(np.isnan(col), st.impute, col)
            blocks.append(((x - st.mean) / st.std)[:, None])
        else:
            st = plan.categorical[name]
            vocab = {v: i for i, v in enumerate(st.vocabulary)}
            other = len(st.vocabulary)
            idx = np.fromiter(
                (vocab.get(st.impute if v is None else str(v), other) for v in col),
                dtype=np.int64,
                count=len(col),
            )
            block = np.zeros((len(col), other + 1))
            block[np.arange(len(col)), idx] = 1.0
            blocks.append(block)
    if plan.sensitive_name is not None:
        blocks.append(np.asarray(columns[plan.sensitive_name], dtype=np.float64)[:, None])
    return np.hstack(blocks) if blocks else np.zeros((n_rows, 0))


def apply_preprocess(plan: PreprocessPlan, t: Table) -> tuple[np.ndarray, tuple[str, ...]]:
    """Encode ``t`` with ``plan``'s statistics -> (design matrix, feature names)."""
    got = tuple((c.name, c.kind) for c in t.feature_specs())
    if got != plan.source_schema:
        raise DataError("table schema does not match the preprocessing plan")
    cols = {name: t.columns[name] for name, _ in plan.source_schema}
    if plan.sensitive_name is not None:
        cols[plan.sensitive_name] = t.columns[plan.sensitive_name]
    return transform_columns(plan, cols), plan.feature_names
