"""Reject-inference strategies.

Every strategy consumes only observable parts of a scenario: study features
of the whole pool, the accept mask, and labels of the accepted rows. The
hidden labels of rejects are never read here.

Strategy families:
- augmentation: reweight accepted rows so they stand in for the full pool
  (upward / downward / soft cut-off), or duplicate each reject as a
  half-good half-bad pair (fuzzy parcelling);
- extrapolation: score rejects with an accepts-only model and adopt the
  thresholded predictions as labels (all / bad-only / most-confident);
- label spreading: diffuse accepted labels over a kNN similarity graph and
  read off labels for the rejects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from ..errors import DataError, FitError
from ..learners import LogisticModel, Predictor, fit_logistic
from .scenario import RejectScenario

ACCEPTED = "accepted"
REJECT_INFERRED = "reject_inferred"
REJECT_DUP_GOOD = "reject_duplicate_good"
REJECT_DUP_BAD = "reject_duplicate_bad"

PROB_CLIP = 1e-3


@dataclass
class AugmentedTrainingSet:
    X: np.ndarray
    y: np.ndarray
    weights: np.ndarray
    provenance: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights <= 0):
            raise FitError("augmentation weights must be positive and finite")
        if not np.any(self.provenance == ACCEPTED):
            raise FitError("accepted rows missing from training set")


class AcceptanceModel(Predictor):
    """P(accept | study features), clipped away from 0 and 1 so downstream
    inverse-probability weights stay bounded."""

    def __init__(self, model: LogisticModel, clip: float = PROB_CLIP):
        self.model = model
        self.clip = clip

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return np.clip(self.model.predict_proba(X), self.clip, 1.0 - self.clip)


def acceptance_model(scenario: RejectScenario) -> AcceptanceModel:
    accept = scenario.accept_mask.astype(np.float64)
    model = fit_logistic(scenario.X_pool, accept)
    return AcceptanceModel(model)


def _accepted_base(scenario: RejectScenario) -> tuple[np.ndarray, np.ndarray]:
    return scenario.X_accepted, scenario.y_accepted


def augment_upward(scenario: RejectScenario, acc_model: AcceptanceModel) -> AugmentedTrainingSet:
    X, y = _accepted_base(scenario)
    w = 1.0 / acc_model.predict_proba(X)
    w = w / np.mean(w)
    return AugmentedTrainingSet(X, y, w, np.full(len(y), ACCEPTED, dtype=object))


def augment_downward(scenario: RejectScenario, acc_model: AcceptanceModel) -> AugmentedTrainingSet:
    X, y = _accepted_base(scenario)
    w = 1.0 - acc_model.predict_proba(X)
    w = w / np.mean(w)
    return AugmentedTrainingSet(X, y, w, np.full(len(y), ACCEPTED, dtype=object))


def augment_soft_cutoff(scenario: RejectScenario, acc_model: AcceptanceModel,
                        n_bands: int = 10) -> AugmentedTrainingSet:
    """Band the pool by acceptance score; each accepted row carries its
    band's pool-to-accepted count ratio, so bands with many rejects gain
    influence. Weighted accepted mass per band equals the band's pool size."""
    if n_bands < 2:
        raise DataError("n_bands must be >= 2")
    s_pool = acc_model.predict_proba(scenario.X_pool)
    edges = np.unique(np.quantile(s_pool, np.linspace(0, 1, n_bands + 1)[1:-1]))
    band = np.searchsorted(edges, s_pool, side="right")
    n_total = len(edges) + 1

    diagnostics: dict = {}
    acc = scenario.accept_mask
    merged: list[list[int]] = []
    for b in range(n_total):
        in_band = band == b
        if np.any(in_band & acc) or not np.any(in_band):
            merged.append([b])
        elif merged:
            merged[-1].append(b)
            diagnostics.setdefault("merged_bands", []).append(b)
        else:
            merged.append([b])
            diagnostics.setdefault("deferred_bands", []).append(b)

    X, y = _accepted_base(scenario)
    w = np.ones(len(y))
    band_acc = band[acc]
    carry: list[int] = []
    for group in merged:
        members = group + carry
        in_group = np.isin(band, members)
        in_group_acc = np.isin(band_acc, members)
        n_acc = int(np.sum(in_group_acc))
        if n_acc == 0:
            carry = members  # leading bands with no accepted rows roll forward
            continue
        carry = []
        w[in_group_acc] = np.sum(in_group) / n_acc
    return AugmentedTrainingSet(X, y, w, np.full(len(y), ACCEPTED, dtype=object), diagnostics)


def augment_fuzzy(scenario: RejectScenario, acc_model: AcceptanceModel) -> AugmentedTrainingSet:
    Xa, ya = _accepted_base(scenario)
    Xr = scenario.X_rejected
    p_acc = acc_model.predict_proba(Xr)
    X = np.concatenate([Xa, Xr, Xr], axis=0)
    y = np.concatenate([ya, np.zeros(len(Xr)), np.ones(len(Xr))])
    w = np.concatenate([np.ones(len(ya)), p_acc, 1.0 - p_acc])
    prov = np.concatenate([
        np.full(len(ya), ACCEPTED, dtype=object),
        np.full(len(Xr), REJECT_DUP_GOOD, dtype=object),
        np.full(len(Xr), REJECT_DUP_BAD, dtype=object),
    ])
    return AugmentedTrainingSet(X, y, w, prov)


def extrapolate(scenario: RejectScenario, base_model: Predictor, variant: str = "AE",
                confidence: float = 0.1) -> AugmentedTrainingSet:
    """Adopt thresholded accepts-only-model scores as reject labels.

    AE keeps every reject, BE only those inferred bad, CE the `confidence`
    fraction most confidently scored per side.
    """
    if variant not in ("AE", "BE", "CE"):
        raise DataError(f"unknown extrapolation variant {variant!r}")
    Xa, ya = _accepted_base(scenario)
    Xr = scenario.X_rejected
    diagnostics: dict = {}
    if len(Xr) == 0:
        keep = np.zeros(0, dtype=np.int64)
        inferred = np.zeros(0)
    else:
        scores = base_model.predict_proba(Xr)
        labels = (scores >= 0.5).astype(np.float64)
        if variant == "AE":
            keep = np.arange(len(Xr))
        elif variant == "BE":
            keep = np.flatnonzero(labels == 1)
        else:
            k = int(np.floor(confidence * len(Xr)))
            if 2 * k > len(Xr):
                k = len(Xr) // 2
                diagnostics["confidence_scaled_to"] = k / len(Xr)
            order = np.argsort(scores, kind="stable")
            keep = np.concatenate([order[:k], order[len(Xr) - k:]])
        inferred = labels[keep]
    X = np.concatenate([Xa, Xr[keep]], axis=0)
    y = np.concatenate([ya, inferred])
    w = np.ones(len(y))
    prov = np.concatenate([
        np.full(len(ya), ACCEPTED, dtype=object),
        np.full(len(keep), REJECT_INFERRED, dtype=object),
    ])
    return AugmentedTrainingSet(X, y, w, prov, diagnostics)


@dataclass(frozen=True)
class GraphConfig:
    k: int = 7
    gamma: float | None = None  # default 1/n_features
    alpha: float = 0.8
    tol: float = 1e-3
    max_iter: int = 1000

    def __post_init__(self):
        if self.k < 1:
            raise DataError("k must be >= 1")
        if not (0 <= self.alpha < 1):
            raise DataError("alpha must lie in [0, 1)")


@dataclass
class SpreadResult:
    reject_labels: np.ndarray
    reject_confidence: np.ndarray
    pool_labels: np.ndarray
    converged: bool
    n_iter: int
    diagnostics: dict = field(default_factory=dict)


def _knn_rbf_graph(X: np.ndarray, k: int, gamma: float) -> sparse.csr_matrix:
    """Symmetric (union) kNN adjacency with RBF edge weights, zero diagonal.
    Distances computed in row chunks to cap memory."""
    n = X.shape[0]
    k = min(k, n - 1)
    sq = np.sum(X * X, axis=1)
    rows, cols, vals = [], [], []
    chunk = max(1, int(2 ** 22 // max(n, 1)))
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        d2 = sq[start:stop, None] + sq[None, :] - 2.0 * (X[start:stop] @ X.T)
        np.maximum(d2, 0.0, out=d2)
        for i in range(start, stop):
            d2[i - start, i] = np.inf
        nbr = np.argpartition(d2, k - 1, axis=1)[:, :k]
        for i in range(start, stop):
            rows.append(np.full(k, i))
            cols.append(nbr[i - start])
            vals.append(np.exp(-gamma * d2[i - start, nbr[i - start]]))
    W = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    return W.maximum(W.T)


def label_spreading(scenario: RejectScenario, config: GraphConfig = GraphConfig()) -> SpreadResult:
    """Diffuse accepted labels to rejects over a kNN RBF graph:
    F <- alpha * S @ F + (1 - alpha) * F0, S the symmetrically normalized
    adjacency and F0 the one-hot observed labels (zero rows for rejects)."""
    X = scenario.X_pool
    n = X.shape[0]
    gamma = config.gamma if config.gamma is not None else 1.0 / X.shape[1]
    W = _knn_rbf_graph(X, config.k, gamma)

    deg = np.asarray(W.sum(axis=1)).ravel()
    inv_sqrt = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    S = sparse.diags(inv_sqrt) @ W @ sparse.diags(inv_sqrt)

    F0 = np.zeros((n, 2))
    acc_idx = np.flatnonzero(scenario.accept_mask)
    F0[acc_idx, scenario.y_accepted.astype(np.int64)] = 1.0

    F = F0.copy()
    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        F_new = config.alpha * (S @ F) + (1.0 - config.alpha) * F0
        delta = float(np.max(np.abs(F_new - F)))
        F = F_new
        if delta < config.tol:
            converged = True
            break

    row_sum = F.sum(axis=1)
    labels = np.argmax(F, axis=1).astype(np.float64)
    conf = np.where(row_sum > 0, np.max(F, axis=1) / np.where(row_sum > 0, row_sum, 1.0), 0.5)
    rej = ~scenario.accept_mask
    diagnostics = {}
    low = conf[rej] <= 0.5 + 1e-12
    if np.any(low):
        diagnostics["low_confidence_rejects"] = int(np.sum(low))
    if not converged:
        diagnostics["max_iter_reached"] = config.max_iter
    return SpreadResult(
        reject_labels=labels[rej],
        reject_confidence=conf[rej],
        pool_labels=labels,
        converged=converged,
        n_iter=it,
        diagnostics=diagnostics,
    )


def spread_training_set(scenario: RejectScenario, result: SpreadResult) -> AugmentedTrainingSet:
    """Accepted rows with true labels plus rejects with spread labels."""
    Xa, ya = scenario.X_accepted, scenario.y_accepted
    Xr = scenario.X_rejected
    X = np.concatenate([Xa, Xr], axis=0)
    y = np.concatenate([ya, result.reject_labels])
    prov = np.concatenate([
        np.full(len(ya), ACCEPTED, dtype=object),
        np.full(len(Xr), REJECT_INFERRED, dtype=object),
    ])
    return AugmentedTrainingSet(X, y, np.ones(len(y)), prov)
