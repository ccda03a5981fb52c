"""Column schema and the immutable Table container.

Conventions carried by every Table in the package: the label column is
binary {0, 1} with 1 = default/bad, the sensitive column is binary
{0 privileged, 1 unprivileged}, and missing values are NaN (numeric) or
None (categorical).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError

KINDS = ("numeric", "categorical")
ROLES = ("feature", "label", "sensitive", "ignore")


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str
    role: str = "feature"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.role not in ROLES:
            raise DataError(f"column {self.name!r}: unknown role {self.role!r}")


class Table:
    """Immutable columnar dataset.

    columns: dict name -> np.ndarray; float64 for numeric (NaN = missing),
    object for categorical (None = missing). Label and sensitive columns are
    stored as float64 in {0.0, 1.0} with no missing entries.
    """

    def __init__(self, schema: list[ColumnSpec] | tuple[ColumnSpec, ...], columns: dict[str, np.ndarray]):
        schema = tuple(schema)
        names = [c.name for c in schema]
        if len(set(names)) != len(names):
            raise DataError("duplicate column names in schema")
        labels = [c for c in schema if c.role == "label"]
        if len(labels) != 1:
            raise DataError(f"schema must have exactly one label column, got {len(labels)}")
        sens = [c for c in schema if c.role == "sensitive"]
        if len(sens) > 1:
            raise DataError("schema must have at most one sensitive column")
        if set(columns) != set(names):
            raise DataError("columns do not match schema names")

        lengths = {len(columns[n]) for n in names}
        if len(lengths) > 1:
            raise DataError(f"ragged columns: lengths {sorted(lengths)}")
        self._n_rows = lengths.pop() if lengths else 0

        cols: dict[str, np.ndarray] = {}
        for c in schema:
            arr = columns[c.name]
            if c.kind == "numeric":
                arr = np.asarray(arr, dtype=np.float64)
            else:
                arr = np.asarray(arr, dtype=object)
            arr.setflags(write=False)
            cols[c.name] = arr
        for c in (labels[0], *sens):
            vals = cols[c.name]
            if not np.all(np.isin(vals, (0.0, 1.0))):
                raise DataError(f"column {c.name!r} (role={c.role}) must be binary 0/1 with no missing")

        self.schema = schema
        self.columns = cols

    @property
    def n_rows(self) -> int:
        return self._n_rows

    @property
    def label_name(self) -> str:
        return next(c.name for c in self.schema if c.role == "label")

    @property
    def sensitive_name(self) -> str | None:
        return next((c.name for c in self.schema if c.role == "sensitive"), None)

    def labels(self) -> np.ndarray:
        return self.columns[self.label_name]

    def sensitive(self) -> np.ndarray:
        name = self.sensitive_name
        if name is None:
            raise DataError("table has no sensitive column")
        return self.columns[name]

    def feature_specs(self) -> list[ColumnSpec]:
        return [c for c in self.schema if c.role == "feature"]

    def positive_rate(self) -> float:
        return float(np.mean(self.labels()))

    def select_rows(self, indices: np.ndarray) -> "Table":
        indices = np.asarray(indices)
        return Table(self.schema, {n: self.columns[n][indices].copy() for n in self.columns})

    def with_columns(self, updates: dict[str, np.ndarray]) -> "Table":
        """New Table with some columns replaced (same schema)."""
        cols = dict(self.columns)
        for name, arr in updates.items():
            if name not in cols:
                raise DataError(f"unknown column {name!r}")
            cols[name] = np.array(arr, copy=True)
        return Table(self.schema, cols)

    def select_features(self, names: list[str]) -> "Table":
        """New Table keeping only the named feature columns (label and
        sensitive columns are always retained)."""
        feature_names = {c.name for c in self.feature_specs()}
        unknown = [n for n in names if n not in feature_names]
        if unknown:
            raise DataError(f"unknown feature columns {unknown}")
        wanted = set(names)
        schema = [c for c in self.schema if c.role != "feature" or c.name in wanted]
        return Table(schema, {c.name: self.columns[c.name] for c in schema})
