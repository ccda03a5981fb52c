"""Shapley-value attributions for single rows.

The cooperative game's players are the original source features; a
coalition's value is the mean model output over the background sample with
coalition features pinned to the explained row and the rest left at
background values (interventional marginalization). Exact mode enumerates
every coalition; permutation mode averages marginal contributions along
seeded random orderings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from ..errors import DataError
from ..rng import substream
from .pipeline import Columns, ScoringPipeline, n_rows, tile_row

EXACT_FEATURE_LIMIT = 12


@dataclass
class Attribution:
    base_value: float
    names: tuple[str, ...]
    contributions: np.ndarray
    scale: str  # probability | label
    mode: str  # exact | permutation
    diagnostics: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        """base_value + sum of contributions; equals the model output on the
        explained row (exactly for exact mode)."""
        return float(self.base_value + np.sum(self.contributions))

    def ranked(self) -> list[tuple[str, float]]:
        order = np.argsort(-np.abs(self.contributions), kind="stable")
        return [(self.names[i], float(self.contributions[i])) for i in order]


def _coalition_value(pipeline: ScoringPipeline, row: dict, background: Columns,
                     members: tuple[str, ...], scale: str) -> float:
    m = n_rows(background)
    cols = dict(background)
    if members:
        pinned = tile_row({k: row[k] for k in members}, m)
        cols.update(pinned)
    return float(np.mean(pipeline.predict(cols, scale)))


def shap_values(
    pipeline: ScoringPipeline,
    row: dict,
    background: Columns,
    mode: str = "exact",
    n_permutations: int = 100,
    seed: int = 0,
    scale: str = "probability",
) -> Attribution:
    names = pipeline.feature_names
    d = len(names)
    if n_rows(background) == 0:
        raise DataError("background sample is empty")
    if mode not in ("exact", "permutation"):
        raise DataError(f"unknown attribution mode {mode!r}")
    if mode == "exact" and d > EXACT_FEATURE_LIMIT:
        raise DataError(
            f"exact mode enumerates 2^{d} coalitions; use mode='permutation' "
            f"for more than {EXACT_FEATURE_LIMIT} features"
        )

    def value(member_mask: int) -> float:
        members = tuple(names[i] for i in range(d) if member_mask >> i & 1)
        return _coalition_value(pipeline, row, background, members, scale)

    if mode == "exact":
        values = np.array([value(mask) for mask in range(1 << d)])
        weights = np.array([1.0 / (d * comb(d - 1, s)) for s in range(d)])
        phi = np.zeros(d)
        for mask in range(1 << d):
            s = bin(mask).count("1")
            for k in range(d):
                if not mask >> k & 1:
                    phi[k] += weights[s] * (values[mask | 1 << k] - values[mask])
        return Attribution(float(values[0]), names, phi, scale, mode)

    base = value(0)
    phi = np.zeros(d)
    for p in range(n_permutations):
        order = substream(seed, "shap", p).permutation(d)
        mask = 0
        prev = base
        for k in order:
            mask |= 1 << int(k)
            cur = value(mask)
            phi[k] += cur - prev
            prev = cur
    phi /= n_permutations
    return Attribution(base, names, phi, scale, mode,
                       {"n_permutations": n_permutations, "seed": seed})
