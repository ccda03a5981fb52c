"""Partial-dependence and individual-conditional-expectation curves.

Grids live on the original feature scale; predictions are probabilities
unless a margin scale is requested.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError
from ..rng import substream
from .pipeline import Columns, ScoringPipeline, n_rows, take_rows


@dataclass
class CurveSet:
    feature: str
    grid: np.ndarray  # original scale, strictly increasing when numeric
    pd_curve: np.ndarray  # pointwise mean of ice_lines when those exist
    ice_lines: np.ndarray | None = None  # (n_rows, n_grid)
    centered: bool = False
    color_values: np.ndarray | None = None
    color_by: str | None = None
    scale: str = "probability"
    diagnostics: dict = field(default_factory=dict)


def _numeric_grid(values: np.ndarray, grid_size: int) -> np.ndarray:
    finite = values[~np.isnan(np.asarray(values, dtype=np.float64))]
    if finite.size == 0:
        raise DataError("feature is all-missing; no grid available")
    qs = np.linspace(0.0, 1.0, grid_size)
    return np.unique(np.quantile(finite, qs))


def _line_matrix(pipeline: ScoringPipeline, columns: Columns, feature: str,
                 grid: np.ndarray, scale: str) -> np.ndarray:
    lines = np.empty((n_rows(columns), len(grid)))
    for j, v in enumerate(grid):
        cols = dict(columns)
        if pipeline.kind_of[feature] == "numeric":
            cols[feature] = np.full(n_rows(columns), float(v))
        else:
            const = np.empty(n_rows(columns), dtype=object)
            const[:] = v
            cols[feature] = const
        lines[:, j] = pipeline.predict(cols, scale)
    return lines


def partial_dependence(
    pipeline: ScoringPipeline,
    feature: str,
    data: Columns,
    grid_size: int = 20,
    scale: str = "probability",
) -> CurveSet:
    """Mean prediction as the feature sweeps a quantile (or vocabulary) grid
    while every other column keeps its observed values."""
    if feature not in pipeline.kind_of:
        raise DataError(f"unknown feature {feature!r}")
    diagnostics: dict = {}
    if pipeline.kind_of[feature] == "numeric":
        grid = _numeric_grid(np.asarray(data[feature], dtype=np.float64), grid_size)
        if len(grid) == 1:
            diagnostics["constant_feature"] = True
    else:
        vocab = pipeline.plan.categorical[feature].vocabulary
        grid = np.array(vocab, dtype=object)
        if len(grid) == 1:
            diagnostics["constant_feature"] = True
    lines = _line_matrix(pipeline, data, feature, grid, scale)
    return CurveSet(feature, grid, lines.mean(axis=0), None, False, None, None,
                    scale, diagnostics)


def ice(
    pipeline: ScoringPipeline,
    feature: str,
    data: Columns,
    grid_size: int = 20,
    sample: int | None = None,
    centered: bool = False,
    color_by: str | None = None,
    seed: int = 0,
    scale: str = "probability",
) -> CurveSet:
    """One prediction trajectory per (subsampled) row over the feature grid.
    Centered mode anchors every line at zero by subtracting its first value."""
    if feature not in pipeline.kind_of:
        raise DataError(f"unknown feature {feature!r}")
    if pipeline.kind_of[feature] != "numeric":
        raise DataError(
            f"{feature!r} is categorical; trajectories need an ordered axis, "
            "use partial_dependence instead"
        )
    if color_by is not None and color_by not in data:
        raise DataError(f"unknown color_by column {color_by!r}")
    if sample is not None and sample < n_rows(data):
        idx = np.sort(substream(seed, "ice").choice(n_rows(data), size=sample, replace=False))
        data = take_rows(data, idx)
    grid = _numeric_grid(np.asarray(data[feature], dtype=np.float64), grid_size)
    diagnostics: dict = {}
    if len(grid) == 1:
        diagnostics["constant_feature"] = True
    lines = _line_matrix(pipeline, data, feature, grid, scale)
    if centered:
        lines = lines - lines[:, [0]]
    color = np.asarray(data[color_by]) if color_by is not None else None
    return CurveSet(feature, grid, lines.mean(axis=0), lines, centered, color,
                    color_by, scale, diagnostics)
