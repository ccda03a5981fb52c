"""Dataset ingestion: delimited files -> Table, with label/sensitive recoding."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import DataError
from .profiles import DatasetProfile
from .schema import ColumnSpec, Table

DATA_DIR_ENV = "CREDITLAB_DATA"


def resolve_data_dir(data_dir: str | Path | None) -> Path:
    if data_dir is not None:
        return Path(data_dir)
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    return Path("data")


def _read_raw(source: Path, profile: DatasetProfile) -> pd.DataFrame:
    kwargs: dict = {
        "header": 0 if profile.header else None,
        "dtype": str,
        "na_values": list(profile.missing_values),
        "keep_default_na": False,
        "skip_blank_lines": True,
    }
    if profile.delimiter == "whitespace":
        kwargs["sep"] = r"\s+"
    else:
        kwargs["sep"] = ","
    try:
        frame = pd.read_csv(source, **kwargs)
    except pd.errors.EmptyDataError:
        raise DataError(f"{source}: empty file, zero rows") from None
    except pd.errors.ParserError as exc:
        raise DataError(f"{source}: parse error: {exc}") from None
    if frame.shape[0] == 0:
        raise DataError(f"{source}: zero data rows")
    return frame


def _infer_columns(frame: pd.DataFrame, profile: DatasetProfile) -> list[ColumnSpec]:
    """Schema inference for profiles that do not enumerate columns.

    A column is numeric when every non-missing value parses as a float.
    """
    specs: list[ColumnSpec] = []
    for name in frame.columns:
        role = "feature"
        if name == profile.label:
            role = "label"
        elif name == profile.sensitive:
            role = "sensitive"
        col = frame[name]
        parsed = pd.to_numeric(col, errors="coerce")
        numeric = bool((parsed.notna() | col.isna()).all())
        specs.append(ColumnSpec(str(name), "numeric" if numeric else "categorical", role))
    return specs


def _recode(values: pd.Series, mapping: dict[str, int], column: str, source: Path) -> np.ndarray:
    if values.isna().any():
        if "MISSING" not in mapping:
            raise DataError(f"{source}: missing values in {column!r} cannot be recoded")
        values = values.fillna("MISSING")
    raw = values.astype(str).str.strip()
    if mapping:
        unknown = sorted(set(raw) - set(mapping))
        if unknown:
            raise DataError(f"{source}: unknown categories {unknown} in column {column!r}")
        return raw.map(mapping).to_numpy(dtype=np.float64)
    out = pd.to_numeric(raw, errors="coerce")
    if out.isna().any() or not out.isin((0, 1)).all():
        raise DataError(f"{source}: column {column!r} must be binary 0/1 (or provide a recode)")
    return out.to_numpy(dtype=np.float64)


def load_dataset(source: str | Path, profile: DatasetProfile) -> Table:
    """Read ``source`` per ``profile`` into a Table.

    Recodes the label to {0 good, 1 bad} and the sensitive column to
    {0 privileged, 1 unprivileged}, then validates expected row count and
    class balance when the profile states them.
    """
    source = Path(source)
    if not source.exists():
        hint = (
            f"generate it with 'creditlab prep' (synthetic profile {profile.name!r})"
            if profile.synthetic
            else "download it with scripts/fetch_data.sh"
        )
        raise DataError(f"{source}: dataset file missing; {hint}")
    frame = _read_raw(source, profile)

    specs = list(profile.columns)
    if specs:
        if frame.shape[1] != len(specs):
            raise DataError(
                f"{source}: expected {len(specs)} columns per profile {profile.name!r}, found {frame.shape[1]}"
            )
        frame.columns = [c.name for c in specs]
    else:
        specs = _infer_columns(frame, profile)

    columns: dict[str, np.ndarray] = {}
    out_specs: list[ColumnSpec] = []
    for spec in specs:
        if spec.role == "ignore":
            continue
        col = frame[spec.name]
        if spec.role == "label":
            columns[spec.name] = _recode(col, profile.label_recode, spec.name, source)
            out_specs.append(ColumnSpec(spec.name, "numeric", "label"))
        elif spec.role == "sensitive":
            columns[spec.name] = _recode(col, profile.sensitive_recode, spec.name, source)
            out_specs.append(ColumnSpec(spec.name, "numeric", "sensitive"))
        elif spec.kind == "numeric":
            parsed = pd.to_numeric(col, errors="coerce")
            bad = col.notna() & parsed.isna()
            if bad.any():
                row = int(np.argmax(bad.to_numpy())) + 1
                raise DataError(f"{source}: non-numeric value in column {spec.name!r} at data row {row}")
            columns[spec.name] = parsed.to_numpy(dtype=np.float64)
            out_specs.append(spec)
        else:
            vals = col.astype(object).where(col.notna(), None).to_numpy(dtype=object)
            columns[spec.name] = vals
            out_specs.append(spec)

    table = Table(out_specs, columns)
    if profile.expected_rows is not None and table.n_rows != profile.expected_rows:
        raise DataError(f"{source}: expected {profile.expected_rows} rows, found {table.n_rows}")
    if profile.expected_positive_rate is not None:
        rate = table.positive_rate()
        if abs(rate - profile.expected_positive_rate) > 0.015:
            raise DataError(
                f"{source}: positive rate {rate:.3f} deviates from expected "
                f"{profile.expected_positive_rate:.3f}"
            )
    return table
