"""Local linear surrogate of an opaque scorer around one row.

Numeric features are perturbed with unit Gaussian noise in standardized
space; categorical features are resampled from their empirical marginals.
A proximity-weighted ridge regression over the perturbed cloud yields
interpretable coefficients plus an R^2 fit-quality report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError
from ..rng import substream
from .pipeline import Columns, ScoringPipeline, n_rows


@dataclass
class LimeSurrogate:
    names: tuple[str, ...]
    coefficients: np.ndarray
    intercept: float
    r_squared: float
    kernel_width: float
    diagnostics: dict = field(default_factory=dict)

    def ranked(self) -> list[tuple[str, float]]:
        order = np.argsort(-np.abs(self.coefficients), kind="stable")
        return [(self.names[i], float(self.coefficients[i])) for i in order]


def lime_local(
    pipeline: ScoringPipeline,
    row: dict,
    data: Columns,
    n_samples: int = 1000,
    kernel_width: float | None = None,
    seed: int = 0,
    ridge: float = 1e-3,
) -> LimeSurrogate:
    names = pipeline.feature_names
    d = len(names)
    if n_samples < 10 * d:
        raise DataError(f"n_samples must be >= 10 * n_features = {10 * d}")
    kw = float(kernel_width) if kernel_width is not None else 0.75 * np.sqrt(d)
    rng = substream(seed, "lime")

    plan = pipeline.plan
    perturbed: Columns = {}
    design = np.empty((n_samples, d))
    anchor = np.empty(d)
    for j, name in enumerate(names):
        if pipeline.kind_of[name] == "numeric":
            st = plan.numeric.get(name)
            mean, std = (st.mean, st.std) if st is not None else (0.0, 1.0)
            x0 = float(row[name])
            if np.isnan(x0):
                x0 = st.impute if st is not None else 0.0
            z0 = (x0 - mean) / std
            z = z0 + rng.standard_normal(n_samples)
            perturbed[name] = mean + std * z
            design[:, j] = z
            anchor[j] = z0
        else:
            pool = np.asarray(data[name], dtype=object)
            draw = pool[rng.integers(len(pool), size=n_samples)]
            perturbed[name] = draw
            design[:, j] = (draw == row[name]).astype(np.float64)
            anchor[j] = 1.0

    if float(np.max(np.var(design, axis=0))) < 1e-24:
        raise DataError("degenerate perturbation: surrogate design has no variance")

    target = pipeline.predict_proba(perturbed)
    dist2 = np.sum((design - anchor) ** 2, axis=1)
    w = np.exp(-dist2 / kw**2)

    A = np.column_stack([np.ones(n_samples), design])
    reg = ridge * np.eye(d + 1)
    reg[0, 0] = 0.0
    beta = np.linalg.solve(A.T @ (w[:, None] * A) + reg, A.T @ (w * target))
    pred = A @ beta
    ybar = np.sum(w * target) / np.sum(w)
    ss_res = float(np.sum(w * (target - pred) ** 2))
    ss_tot = float(np.sum(w * (target - ybar) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return LimeSurrogate(names, beta[1:], float(beta[0]), r2, kw,
                         {"n_samples": n_samples, "seed": seed})
