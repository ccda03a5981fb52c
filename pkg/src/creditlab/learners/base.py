"""Predictor contract and shared fitting utilities."""

from __future__ import annotations

import numpy as np

from ..errors import FitError


class Predictor:
    """Scoring interface: predict_proba in [0,1], thresholded predict."""

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(np.int64)


def predict_proba_batch(m: Predictor, X: np.ndarray) -> np.ndarray:
    """Batch scores; elementwise identical to row-at-a-time predict_proba."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise FitError("predict_proba_batch expects a 2-D design matrix")
    return m.predict_proba(X)


def validate_fit_inputs(X, y, w, classification: bool = True):
    """Common preconditions; returns (X, y, w) as float64 arrays, w normalized to mean 1."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise FitError("X must be 2-D")
    if len(y) != X.shape[0]:
        raise FitError(f"X has {X.shape[0]} rows but y has {len(y)}")
    if not np.all(np.isfinite(X)):
        raise FitError("non-finite feature values")
    if w is None:
        w = np.ones(X.shape[0])
    else:
        w = np.asarray(w, dtype=np.float64)
        if len(w) != X.shape[0]:
            raise FitError("weight length mismatch")
        if not np.all(np.isfinite(w)) or np.any(w < 0) or w.sum() <= 0:
            raise FitError("weights must be finite, non-negative, with positive sum")
        w = w / np.mean(w)
    if classification:
        if not np.all(np.isin(y, (0.0, 1.0))):
            raise FitError("labels must be binary 0/1")
        pos = float(np.sum(w * y))
        if pos <= 0 or pos >= float(np.sum(w)):
            raise FitError("single class present (with positive weight)")
    elif not np.all(np.isfinite(y)):
        raise FitError("non-finite regression targets")
    return X, y, np.ones(X.shape[0]) if w is None else w


def canonical_order(X: np.ndarray, *tiebreakers: np.ndarray) -> np.ndarray:
    """Row permutation sorting rows lexicographically by features then tiebreakers.

    Fitters reorder training rows through this before any accumulation, so a
    permuted copy of the same training set yields a bit-identical model.
    """
    keys = [np.asarray(t) for t in tiebreakers[::-1]]
    keys.extend(X[:, j] for j in range(X.shape[1] - 1, -1, -1))
    return np.lexsort(keys)
