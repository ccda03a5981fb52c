"""Decision trees: weighted Gini classification and variance-reduction
regression (the boosting weak learner), with exact or histogram split search.

Node predicate: a row goes left iff x[feature] < threshold. Exact mode places
thresholds at midpoints of consecutive distinct values; histogram mode at
quantile bin edges. Both pick the (feature, threshold) maximizing gain, ties
broken toward the smaller feature index then the smaller threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import FitError
from .base import Predictor, canonical_order, validate_fit_inputs

_GAIN_EPS = 1e-12  # a split must beat ties and FP noise to be taken
_COMBINED_HIST_BUDGET = 4_000_000  # entries; above this, histogram per feature


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int = 3
    min_samples_leaf: int = 1
    mode: str = "classification"  # or "regression"
    reg_lambda: float = 1.0  # leaf shrinkage, regression mode
    min_child_weight: float = 1e-3  # minimum child hessian mass, regression mode
    binned: bool = False
    max_bins: int = 256

    def __post_init__(self):
        if self.max_depth < 1:
            raise FitError("max_depth must be >= 1")
        if self.min_samples_leaf < 1:
            raise FitError("min_samples_leaf must be >= 1")
        if self.mode not in ("classification", "regression"):
            raise FitError(f"unknown tree mode {self.mode!r}")


class TreeModel(Predictor):
    """Binary tree stored as parallel arrays; feature == -1 marks a leaf."""

    def __init__(self, feature, threshold, left, right, value, config: TreeConfig):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.value = np.asarray(value, dtype=np.float64)
        self.config = config
        internal = self.feature >= 0
        if np.any((self.left[internal] < 0) | (self.right[internal] < 0)):
            raise FitError("internal node missing a child")
        if config.mode == "classification" and (
            np.any(self.value[~internal] < 0) or np.any(self.value[~internal] > 1)
        ):
            raise FitError("classification leaf outside [0,1]")

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def decision_value(self, X: np.ndarray) -> np.ndarray:
        """Leaf value per row (probability or log-odds step, per mode)."""
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(X.shape[0], dtype=np.int32)
        while True:
            feat = self.feature[node]
            active = feat >= 0
            if not np.any(active):
                return self.value[node]
            rows = np.flatnonzero(active)
            goes_left = X[rows, feat[rows]] < self.threshold[node[rows]]
            node[rows] = np.where(goes_left, self.left[node[rows]], self.right[node[rows]])

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.config.mode != "classification":
            raise FitError("regression trees do not expose probabilities")
        return self.decision_value(X)

    def split_feature_counts(self, n_features: int) -> np.ndarray:
        counts = np.zeros(n_features, dtype=np.int64)
        for f in self.feature[self.feature >= 0]:
            counts[f] += 1
        return counts


def bin_matrix(X: np.ndarray, max_bins: int = 256) -> tuple[np.ndarray, list[np.ndarray]]:
    """Quantile-bin each column. Returns (bin indices, per-column edge values).

    Columns with <= max_bins distinct values bin exactly (edges = the distinct
    values minus the smallest); bin(x) counts edges <= x, so the split "bins
    <= b go left" corresponds to the predicate x < edges[b].
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    dtype = np.uint8 if max_bins <= 256 else np.uint16
    B = np.empty((n, d), dtype=dtype)
    edges: list[np.ndarray] = []
    for j in range(d):
        u = np.unique(X[:, j])
        if len(u) <= max_bins:
            e = u[1:]
        else:
            qs = np.quantile(X[:, j], np.linspace(0.0, 1.0, max_bins + 1)[1:-1])
            e = np.unique(qs)
        B[:, j] = np.searchsorted(e, X[:, j], side="right")
        edges.append(e)
    return B, edges


class _Builder:
    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def add(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def done(self, config: TreeConfig) -> TreeModel:
        return TreeModel(self.feature, self.threshold, self.left, self.right, self.value, config)


def _leaf_value(cfg: TreeConfig, sw: float, swt: float, swh: float) -> float:
    if cfg.mode == "classification":
        return swt / sw if sw > 0 else 0.5
    return swt / (swh + cfg.reg_lambda)


def _gain_terms(cfg: TreeConfig, sw, swt):
    """Split score contribution of one side; gain = left + right - parent."""
    sw = np.maximum(sw, 1e-300)
    if cfg.mode == "classification":
        # negative weighted Gini mass: -2*(swy - swy^2/sw); larger is purer
        return -2.0 * (swt - swt * swt / sw)
    return swt * swt / sw  # variance-reduction equivalent


def grow_tree_binned(
    B: np.ndarray,
    edges: list[np.ndarray],
    targets: np.ndarray,
    hessians: np.ndarray | None,
    w: np.ndarray,
    config: TreeConfig,
    feature_indices_fn=None,
) -> TreeModel:
    """Level-wise histogram tree growth on pre-binned features.

    feature_indices_fn(node_ordinal) -> candidate feature index array, called
    once per created node (random-forest per-node subsets); None = all.
    """
    n, d = B.shape
    nb = max((len(e) for e in edges), default=0) + 1
    cfg = config
    regression = cfg.mode == "regression"
    h = hessians if hessians is not None else np.ones(n)

    builder = _Builder()
    root = builder.add()
    node_feats: dict[int, np.ndarray | None] = {
        root: None if feature_indices_fn is None else feature_indices_fn(root)
    }

    rows = np.arange(n, dtype=np.int64)
    slot = np.zeros(n, dtype=np.int64)
    level_nodes = [root]
    depth = 0

    if nb < 2:  # every feature constant: nothing to split on
        sw_p = float(w.sum())
        swt_p = float((w * targets).sum())
        swh_p = float((w * h).sum()) if regression else 0.0
        builder.value[root] = _leaf_value(cfg, sw_p, swt_p, swh_p)
        return builder.done(cfg)

    while level_nodes and rows.size:
        m = len(level_nodes)
        w_act = w[rows]
        t_act = (w_act * targets[rows]).astype(np.float64)
        h_act = (w_act * h[rows]).astype(np.float64)
        Bact = B[rows]

        L = m * d * nb
        stats = 4 if regression else 3
        if L * stats <= _COMBINED_HIST_BUDGET * stats and L <= _COMBINED_HIST_BUDGET:
            key = ((slot * d)[:, None] + np.arange(d)[None, :]) * nb + Bact
            flat = key.ravel()
            cnt = np.bincount(flat, minlength=L).reshape(m, d, nb)
            sw = np.bincount(flat, weights=np.repeat(w_act, d), minlength=L).reshape(m, d, nb)
            swt = np.bincount(flat, weights=np.repeat(t_act, d), minlength=L).reshape(m, d, nb)
            swh = (
                np.bincount(flat, weights=np.repeat(h_act, d), minlength=L).reshape(m, d, nb)
                if regression
                else None
            )
        else:
            cnt = np.zeros((m, d, nb), dtype=np.int64)
            sw = np.zeros((m, d, nb))
            swt = np.zeros((m, d, nb))
            swh = np.zeros((m, d, nb)) if regression else None
            base = slot * nb
            for j in range(d):
                key = base + Bact[:, j]
                cnt[:, j, :] = np.bincount(key, minlength=m * nb).reshape(m, nb)
                sw[:, j, :] = np.bincount(key, weights=w_act, minlength=m * nb).reshape(m, nb)
                swt[:, j, :] = np.bincount(key, weights=t_act, minlength=m * nb).reshape(m, nb)
                if regression:
                    swh[:, j, :] = np.bincount(key, weights=h_act, minlength=m * nb).reshape(m, nb)

        cnt_l = np.cumsum(cnt, axis=2)[:, :, :-1]
        sw_l = np.cumsum(sw, axis=2)[:, :, :-1]
        swt_l = np.cumsum(swt, axis=2)[:, :, :-1]
        cnt_p = cnt_l[:, 0:1, -1:] + cnt[:, 0:1, -1:]
        sw_p = (sw_l[:, 0:1, -1:] + sw[:, 0:1, -1:])
        swt_p = (swt_l[:, 0:1, -1:] + swt[:, 0:1, -1:])
        cnt_r = cnt_p - cnt_l
        sw_r = sw_p - sw_l
        swt_r = swt_p - swt_l

        gains = (
            _gain_terms(cfg, sw_l, swt_l)
            + _gain_terms(cfg, sw_r, swt_r)
            - _gain_terms(cfg, sw_p, swt_p)
        )
        valid = (cnt_l >= cfg.min_samples_leaf) & (cnt_r >= cfg.min_samples_leaf)
        if regression:
            swh_l = np.cumsum(swh, axis=2)[:, :, :-1]
            swh_p = swh_l[:, 0:1, -1:] + swh[:, 0:1, -1:]
            swh_r = swh_p - swh_l
            valid &= (swh_l >= cfg.min_child_weight) & (swh_r >= cfg.min_child_weight)
        # bins beyond a feature's real edge count never occur; cnt_r>=1 filters them
        gains = np.where(valid, gains, -np.inf)

        for ordinal, node in enumerate(level_nodes):
            feats = node_feats.pop(node)
            if feats is not None:
                mask = np.full(d, True)
                mask[feats] = False
                gains[ordinal, mask, :] = -np.inf

        best_flat = gains.reshape(m, -1).argmax(axis=1)
        best_gain = gains.reshape(m, -1)[np.arange(m), best_flat]
        best_j = (best_flat // (nb - 1)).astype(np.int64)
        best_b = (best_flat % (nb - 1)).astype(np.int64)

        do_split = (best_gain > _GAIN_EPS) & (depth < cfg.max_depth)

        swh_node = None
        if regression:
            swh_node = (swh_p[:, 0, 0])
        next_nodes: list[int] = []
        slot_map = np.full((m, 2), -1, dtype=np.int64)
        for ordinal, node in enumerate(level_nodes):
            if do_split[ordinal]:
                j, b = int(best_j[ordinal]), int(best_b[ordinal])
                builder.feature[node] = j
                builder.threshold[node] = float(edges[j][b])
                lid, rid = builder.add(), builder.add()
                builder.left[node], builder.right[node] = lid, rid
                if feature_indices_fn is not None:
                    node_feats[lid] = feature_indices_fn(lid)
                    node_feats[rid] = feature_indices_fn(rid)
                else:
                    node_feats[lid] = node_feats[rid] = None
                slot_map[ordinal, 0] = len(next_nodes)
                next_nodes.append(lid)
                slot_map[ordinal, 1] = len(next_nodes)
                next_nodes.append(rid)
            else:
                builder.value[node] = _leaf_value(
                    cfg,
                    float(sw_p[ordinal, 0, 0]),
                    float(swt_p[ordinal, 0, 0]),
                    float(swh_node[ordinal]) if regression else 0.0,
                )

        if not next_nodes:
            break
        keep = do_split[slot]
        rows_k = rows[keep]
        slot_k = slot[keep]
        goes_left = B[rows_k, best_j[slot_k]] <= best_b[slot_k]
        slot = slot_map[slot_k, np.where(goes_left, 0, 1)]
        rows = rows_k
        level_nodes = next_nodes
        depth += 1

    return builder.done(cfg)


def _grow_exact(X, targets, h, w, cfg: TreeConfig, feature_indices_fn, builder: _Builder,
                node: int, rows: np.ndarray, depth: int):
    regression = cfg.mode == "regression"
    tw = w[rows]
    tt = tw * targets[rows]
    th = tw * h[rows]
    sw_p, swt_p, swh_p = tw.sum(), tt.sum(), th.sum()

    def make_leaf():
        builder.value[node] = _leaf_value(cfg, float(sw_p), float(swt_p), float(swh_p))

    if depth >= cfg.max_depth or rows.size < 2 * cfg.min_samples_leaf:
        make_leaf()
        return
    parent_term = _gain_terms(cfg, np.float64(sw_p), np.float64(swt_p))
    feats = feature_indices_fn(node) if feature_indices_fn is not None else np.arange(X.shape[1])

    best = (-np.inf, -1, 0.0)  # gain, feature, threshold
    for j in np.sort(feats):
        order = np.argsort(X[rows, j], kind="stable")
        xs = X[rows[order], j]
        cw = np.cumsum(tw[order])[:-1]
        ct = np.cumsum(tt[order])[:-1]
        boundary = xs[:-1] < xs[1:]
        cnt = np.arange(1, rows.size)
        ok = boundary & (cnt >= cfg.min_samples_leaf) & (rows.size - cnt >= cfg.min_samples_leaf)
        if regression:
            ch = np.cumsum(th[order])[:-1]
            ok &= (ch >= cfg.min_child_weight) & (swh_p - ch >= cfg.min_child_weight)
        if not np.any(ok):
            continue
        gains = (
            _gain_terms(cfg, cw, ct)
            + _gain_terms(cfg, sw_p - cw, swt_p - ct)
            - parent_term
        )
        gains = np.where(ok, gains, -np.inf)
        k = int(np.argmax(gains))
        if gains[k] > _GAIN_EPS and gains[k] > best[0]:
            best = (float(gains[k]), int(j), float((xs[k] + xs[k + 1]) / 2.0))
    gain, j, thr = best
    if j < 0:
        make_leaf()
        return
    builder.feature[node] = j
    builder.threshold[node] = thr
    lid, rid = builder.add(), builder.add()
    builder.left[node], builder.right[node] = lid, rid
    mask = X[rows, j] < thr
    _grow_exact(X, targets, h, w, cfg, feature_indices_fn, builder, lid, rows[mask], depth + 1)
    _grow_exact(X, targets, h, w, cfg, feature_indices_fn, builder, rid, rows[~mask], depth + 1)


def fit_tree(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray | None = None,
    config: TreeConfig = TreeConfig(),
    hessians: np.ndarray | None = None,
    feature_indices_fn=None,
    presorted: bool = False,
) -> TreeModel:
    """Fit one tree. y holds labels (classification) or gradient targets
    (regression, with per-sample hessians)."""
    classification = config.mode == "classification"
    if classification and hessians is not None:
        raise FitError("hessians only apply to regression mode")
    # both-classes is not required here: pure-label input yields a single leaf
    X, y, w = validate_fit_inputs(X, y, w, classification=False)
    if classification and not np.all(np.isin(y, (0.0, 1.0))):
        raise FitError("labels must be binary 0/1")
    if not classification and hessians is None:
        hessians = np.ones(len(y))
    if not presorted:
        tie = [y, w] + ([hessians] if hessians is not None else [])
        order = canonical_order(X, *tie)
        X, y, w = X[order], y[order], w[order]
        if hessians is not None:
            hessians = np.asarray(hessians)[order]
    if config.binned:
        B, edges = bin_matrix(X, config.max_bins)
        return grow_tree_binned(B, edges, y, hessians, w, config, feature_indices_fn)
    builder = _Builder()
    root = builder.add()
    h = hessians if hessians is not None else np.ones(len(y))
    _grow_exact(X, y, np.asarray(h, dtype=np.float64), w, config, feature_indices_fn,
                builder, root, np.arange(len(y)), 0)
    return builder.done(config)


def tree_config_with(config: TreeConfig, **kwargs) -> TreeConfig:
    return replace(config, **kwargs)
