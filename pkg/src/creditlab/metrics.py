"""Performance, group-fairness, individual-fairness, and reject-inference
metrics.

Conventions: label 1 = default/bad; a score is P(default); the thresholded
prediction is 1 iff score >= threshold; the beneficial outcome is the
*negative* prediction (loan granted). Group Z: 0 privileged, 1 unprivileged.
Undefined metrics raise (or report) typed diagnostics instead of returning
NaN or a silent 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.stats import rankdata

from .errors import UndefinedMetricError


@dataclass(frozen=True)
class EvalFrame:
    scores: np.ndarray
    labels: np.ndarray
    group: np.ndarray | None = None
    weights: np.ndarray | None = None

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.float64)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "labels", labels)
        if len(scores) != len(labels):
            raise UndefinedMetricError("scores and labels have different lengths")
        if scores.size and (scores.min() < 0.0 or scores.max() > 1.0):
            raise UndefinedMetricError("scores must lie in [0,1]")
        if not np.all(np.isin(labels, (0.0, 1.0))):
            raise UndefinedMetricError("labels must be binary")
        if self.group is not None:
            group = np.asarray(self.group, dtype=np.float64)
            object.__setattr__(self, "group", group)
            if len(group) != len(scores):
                raise UndefinedMetricError("group vector length mismatch")
            if not np.all(np.isin(group, (0.0, 1.0))):
                raise UndefinedMetricError("group must be binary")
        if self.weights is not None:
            wts = np.asarray(self.weights, dtype=np.float64)
            object.__setattr__(self, "weights", wts)
            if len(wts) != len(scores) or np.any(wts < 0):
                raise UndefinedMetricError("weights must be non-negative, same length")


def auc(labels: np.ndarray, scores: np.ndarray) -> float:
    """Rank-based AUC; ties contribute 1/2 (midrank convention).

    Accepts arbitrary real scores (probabilities or margins): only ranks matter.
    """
    labels = np.asarray(labels, dtype=np.float64)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError(
            "AUC undefined with a single class", {"n_pos": n_pos, "n_neg": n_neg}
        )
    ranks = rankdata(scores, method="average")
    pos_rank_sum = float(np.sum(ranks[labels == 1]))
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def balanced_accuracy(predictions: np.ndarray, labels: np.ndarray) -> float:
    predictions = np.asarray(predictions, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError(
            "balanced accuracy undefined with a single class",
            {"n_pos": n_pos, "n_neg": n_neg},
        )
    tpr = float(np.sum((predictions == 1) & (labels == 1))) / n_pos
    tnr = float(np.sum((predictions == 0) & (labels == 0))) / n_neg
    return (tpr + tnr) / 2.0


def ks_threshold(scores: np.ndarray, labels: np.ndarray) -> float:
    """Threshold maximizing the gap between the class-conditional score CDFs.

    The gap is constant between consecutive order statistics; the returned
    threshold is the midpoint of the maximizing interval (ties broken toward
    the lower threshold). A zero KS statistic returns the median score.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("KS threshold undefined with a single class")
    s = np.unique(scores)
    # D(u) = |F1(u) - F0(u)| evaluated at each unique score (right-continuous)
    f1 = np.searchsorted(np.sort(scores[labels == 1]), s, side="right") / n_pos
    f0 = np.searchsorted(np.sort(scores[labels == 0]), s, side="right") / n_neg
    d = np.abs(f1 - f0)
    best = int(np.argmax(d))  # first maximum = lowest threshold
    if d[best] <= 0.0:
        return float(np.median(scores))
    if best + 1 < len(s):
        return float((s[best] + s[best + 1]) / 2.0)
    return float(s[best])  # maximum at the top score: all-ones classification


@dataclass(frozen=True)
class FairnessReport:
    dpd: float | None
    eod: float | None
    aod: float | None
    apvd: float | None
    group_rates: dict = field(default_factory=dict)
    threshold: float = 0.5
    diagnostics: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        return {"DPD": self.dpd, "EOD": self.eod, "AOD": self.aod, "APVD": self.apvd,
                "threshold": self.threshold}


def _rate(mask_num: np.ndarray, mask_den: np.ndarray) -> float | None:
    den = int(np.sum(mask_den))
    if den == 0:
        return None
    return float(np.sum(mask_num & mask_den)) / den


def fairness_report(frame: EvalFrame, threshold: float = 0.5) -> FairnessReport:
    """The four group metrics at a decision threshold; absolute values, with
    signed components and cell counts retained in group_rates."""
    if frame.group is None:
        raise UndefinedMetricError("fairness_report requires a group vector")
    z = frame.group
    y = frame.labels
    yhat = (frame.scores >= threshold).astype(np.float64)
    n1, n0 = int(np.sum(z == 1)), int(np.sum(z == 0))
    if n1 == 0 or n0 == 0:
        raise UndefinedMetricError(
            "both groups must be non-empty", {"n_z1": n1, "n_z0": n0}
        )

    fav = yhat == 0  # beneficial outcome: loan granted
    diagnostics: dict[str, dict] = {}
    counts = {
        f"n(z={zi},y={yi})": int(np.sum((z == zi) & (y == yi)))
        for zi in (0, 1)
        for yi in (0, 1)
    }
    counts.update({
        f"n(z={zi},yhat={pi})": int(np.sum((z == zi) & (yhat == pi)))
        for zi in (0, 1)
        for pi in (0, 1)
    })

    # DPD: gap in beneficial-outcome rates
    p1 = _rate(fav, z == 1)
    p0 = _rate(fav, z == 0)
    dpd_signed = p1 - p0

    # EOD: gap among deserving individuals (Y=0)
    e1 = _rate(fav, (z == 1) & (y == 0))
    e0 = _rate(fav, (z == 0) & (y == 0))
    eod_signed = None if e1 is None or e0 is None else e1 - e0
    if eod_signed is None:
        diagnostics["eod"] = {k: v for k, v in counts.items() if ",y=" in k}

    # AOD: average of the per-label gaps D_i = P(fav|Z=1,Y=i) - P(fav|Z=0,Y=i)
    d_parts = []
    for yi in (0, 1):
        a1 = _rate(fav, (z == 1) & (y == yi))
        a0 = _rate(fav, (z == 0) & (y == yi))
        d_parts.append(None if a1 is None or a0 is None else a1 - a0)
    aod_signed = None if any(p is None for p in d_parts) else (d_parts[0] + d_parts[1]) / 2.0
    if aod_signed is None:
        diagnostics["aod"] = {k: v for k, v in counts.items() if ",y=" in k}

    # APVD: average per-prediction gap in P(Y=0 | Z, Yhat=i) (sufficiency)
    dbar = []
    for pi in (0, 1):
        c1 = _rate(y == 0, (z == 1) & (yhat == pi))
        c0 = _rate(y == 0, (z == 0) & (yhat == pi))
        dbar.append(None if c1 is None or c0 is None else c1 - c0)
    apvd_signed = None if any(p is None for p in dbar) else (dbar[0] + dbar[1]) / 2.0
    if apvd_signed is None:
        diagnostics["apvd"] = {k: v for k, v in counts.items() if ",yhat=" in k}

    group_rates = {
        "p_fav_z1": p1,
        "p_fav_z0": p0,
        "p_fav_z1_y0": e1,
        "p_fav_z0_y0": e0,
        "signed": {
            "dpd": dpd_signed,
            "eod": eod_signed,
            "aod": aod_signed,
            "apvd": apvd_signed,
            "aod_parts": d_parts,
            "apvd_parts": dbar,
        },
        "counts": counts,
    }
    absval = lambda v: None if v is None else abs(v)
    return FairnessReport(
        dpd=absval(dpd_signed),
        eod=absval(eod_signed),
        aod=absval(aod_signed),
        apvd=absval(apvd_signed),
        group_rates=group_rates,
        threshold=float(threshold),
        diagnostics=diagnostics,
    )


def consistency(frame: EvalFrame, X: np.ndarray, k: int) -> float:
    """Individual-fairness consistency: 1 - mean |yhat_i - mean(yhat of kNN)|.

    X must exclude the sensitive column; frame.scores supply the predictions
    (pass thresholded 0/1 scores for the binary variant). Neighbor ties are
    broken by row index (stable sort on distances).
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if not (0 < k < n):
        raise UndefinedMetricError("need 0 < k < n neighbors")
    preds = frame.scores
    sq = np.einsum("ij,ij->i", X, X)
    total = 0.0
    chunk = max(1, min(n, int(4_000_000 // max(n, 1)) or 1))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        d2 = sq[start:stop, None] + sq[None, :] - 2.0 * (X[start:stop] @ X.T)
        rows = np.arange(start, stop)
        d2[np.arange(stop - start), rows] = np.inf  # exclude self
        order = np.argsort(d2, axis=1, kind="stable")[:, :k]
        total += float(np.sum(np.abs(preds[rows] - preds[order].mean(axis=1))))
    return 1.0 - total / n


def counterfactual_flip_rate(m, X: np.ndarray, sensitive_col: int, threshold: float = 0.5) -> float:
    """Fraction of rows whose thresholded prediction flips when the binary
    sensitive indicator is toggled with everything else fixed."""
    X = np.asarray(X, dtype=np.float64)
    if not (0 <= sensitive_col < X.shape[1]):
        raise UndefinedMetricError("sensitive column index out of range")
    col = X[:, sensitive_col]
    if not np.all(np.isin(col, (0.0, 1.0))):
        raise UndefinedMetricError("sensitive column must be a binary indicator")
    base = m.predict_proba(X) >= threshold
    flipped = X.copy()
    flipped[:, sensitive_col] = 1.0 - col
    alt = m.predict_proba(flipped) >= threshold
    return float(np.mean(base != alt))


def kickout(baseline_accepts: np.ndarray, new_accepts: np.ndarray, labels: np.ndarray) -> float:
    """KK = KB/B - KG/G: normalized share of bad payers kicked out of the
    baseline accept set minus the share of good payers kicked out."""
    labels = np.asarray(labels, dtype=np.float64)
    base = set(int(i) for i in np.asarray(baseline_accepts).ravel())
    new = set(int(i) for i in np.asarray(new_accepts).ravel())
    if len(base) != len(new):
        raise ValueError(
            f"accept sets must have matched volume: {len(base)} vs {len(new)}"
        )
    bads = {i for i in base if labels[i] == 1}
    goods = base - bads
    if not bads or not goods:
        raise UndefinedMetricError(
            "kickout undefined: baseline accepts need both classes",
            {"B": len(bads), "G": len(goods)},
        )
    kicked = base - new
    kb = sum(1 for i in kicked if labels[i] == 1)
    kg = len(kicked) - kb
    return kb / len(bads) - kg / len(goods)


class ApprovalRate(NamedTuple):
    threshold: float
    rate: float
    diagnostic: str | None = None


def approval_rate(population_scores: np.ndarray, validation: EvalFrame,
                  bad_rate_budget: float = 0.15) -> ApprovalRate:
    """Largest threshold whose accepted validation slice (score < tau) keeps
    the empirical default rate within budget; rate = population share below tau.

    tau = +inf when even accepting everyone meets the budget; tau = -inf (rate
    0, with a diagnostic) when no non-empty accept set does.
    """
    if not (0 < bad_rate_budget < 1 or bad_rate_budget == 1.0):
        raise UndefinedMetricError("budget must lie in (0, 1]")
    population_scores = np.asarray(population_scores, dtype=np.float64)
    v_scores = validation.scores
    v_labels = validation.labels

    order = np.argsort(v_scores, kind="stable")
    s_sorted = v_scores[order]
    bad_prefix = np.cumsum(v_labels[order])

    if bad_prefix[-1] / len(s_sorted) <= bad_rate_budget:
        return ApprovalRate(np.inf, float(np.mean(population_scores < np.inf)), None)
    # candidates: tau = each unique score, accepting strictly-below rows
    uniq, first_idx = np.unique(s_sorted, return_index=True)
    for tau, idx in zip(uniq[::-1], first_idx[::-1]):
        n_acc = int(idx)  # rows strictly below tau
        if n_acc == 0:
            continue
        if bad_prefix[n_acc - 1] / n_acc <= bad_rate_budget:
            return ApprovalRate(float(tau), float(np.mean(population_scores < tau)), None)
    return ApprovalRate(-np.inf, 0.0, "no threshold meets the bad-rate budget")
