"""Stratified train/valid/test splitting with an optional fixed test set."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..rng import substream
from .schema import Table


@dataclass(frozen=True)
class SplitSpec:
    seed: int
    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)
    n_repeats: int = 1
    fixed_test: bool = False

    def __post_init__(self):
        if any(f <= 0 for f in self.fractions):
            raise DataError("split fractions must be positive")
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise DataError("split fractions must sum to 1")
        if self.n_repeats < 1:
            raise DataError("n_repeats must be >= 1")


def _allocate(n: int, fractions: tuple[float, ...]) -> list[int]:
    """Largest-remainder allocation of n items across parts; sums to n exactly."""
    raw = [n * f for f in fractions]
    base = [int(np.floor(r)) for r in raw]
    leftover = n - sum(base)
    order = sorted(range(len(fractions)), key=lambda i: (-(raw[i] - base[i]), i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def _partition(indices_by_class: list[np.ndarray], fractions: tuple[float, ...], rng: np.random.Generator,
               n_parts: int) -> list[np.ndarray]:
    parts: list[list[np.ndarray]] = [[] for _ in range(n_parts)]
    for cls_idx in indices_by_class:
        shuffled = rng.permutation(cls_idx)
        counts = _allocate(len(cls_idx), fractions)
        if any(c == 0 for c in counts):
            raise DataError(
                f"stratification error: a class with {len(cls_idx)} rows cannot cover all parts"
            )
        offset = 0
        for p, c in enumerate(counts):
            parts[p].append(shuffled[offset:offset + c])
            offset += c
    return [np.sort(np.concatenate(chunks)) for chunks in parts]


def split(t: Table, spec: SplitSpec) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Index triples (train, valid, test), one per repeat.

    Stratified by label: each part's positive rate stays within one
    percentage point of the full table's. With fixed_test, the test indices
    are drawn once and shared by every repeat.
    """
    if t.n_rows < 10:
        raise DataError("need at least 10 rows to split")
    y = t.labels()
    by_class = [np.flatnonzero(y == v) for v in (0.0, 1.0)]
    if any(len(c) == 0 for c in by_class):
        raise DataError("stratification error: table has a single label class")

    f_train, f_valid, f_test = spec.fractions
    triples: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    if spec.fixed_test:
        rest, test = _partition(by_class, (f_train + f_valid, f_test), substream(spec.seed, "test"), 2)
        rest_by_class = [rest[np.isin(rest, cls)] for cls in by_class]
        tv = (f_train / (f_train + f_valid), f_valid / (f_train + f_valid))
        for r in range(spec.n_repeats):
            train, valid = _partition(rest_by_class, tv, substream(spec.seed, "split", r), 2)
            triples.append((train, valid, test))
    else:
        for r in range(spec.n_repeats):
            train, valid, test = _partition(by_class, (f_train, f_valid, f_test),
                                            substream(spec.seed, "split", r), 3)
            triples.append((train, valid, test))
    return triples
