"""Gradient boosting on logistic loss with histogram trees.

Each round fits a regression tree to the negative gradient g = y - p with
hessian h = p(1-p) of the weighted logistic loss at the current margins; leaf
values are Newton steps sum(w*g) / (sum(w*h) + lambda). An optional constraint
hook injects an extra (sub)gradient per round (fairness-constrained boosting
lives in mitigation and plugs in through this interface).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import FitError
from ..rng import substream
from .base import Predictor, canonical_order, validate_fit_inputs
from .logistic import sigmoid
from .tree import TreeConfig, TreeModel, bin_matrix, grow_tree_binned


@dataclass(frozen=True)
class BoostConfig:
    n_trees: int = 150
    learning_rate: float = 0.1
    max_depth: int = 3
    min_samples_leaf: int = 1
    min_child_weight: float = 1e-3
    reg_lambda: float = 1.0
    subsample: float = 1.0
    seed: int = 0
    binned: bool = True
    max_bins: int = 256

    def __post_init__(self):
        if not (0 < self.learning_rate <= 1):
            raise FitError("learning_rate must be in (0, 1]")
        if not (0 < self.subsample <= 1):
            raise FitError("subsample must be in (0, 1]")
        if self.n_trees < 0:
            raise FitError("n_trees must be >= 0")


class BoostConstraint:
    """Hook interface for constrained boosting.

    margin_gradient(F, y) returns (dg, dh): the penalty's gradient and a
    non-negative hessian contribution with respect to the margins; both are
    *added* to the loss gradient (p - y) and hessian. multiplier_update(F, y)
    runs once per round after the margin update. reorder(order) is called once
    with the internal canonical row permutation before fitting starts.
    """

    def margin_gradient(self, F: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def multiplier_update(self, F: np.ndarray, y: np.ndarray) -> None:  # pragma: no cover
        return None

    def reorder(self, order: np.ndarray) -> None:  # pragma: no cover
        return None


class BoostModel(Predictor):
    def __init__(self, trees: list[TreeModel], learning_rate: float, base_score: float,
                 config: BoostConfig, train_loss: list[float] | None = None,
                 best_iteration: int | None = None):
        self.trees = trees
        self.learning_rate = float(learning_rate)
        self.base_score = float(base_score)
        self.config = config
        self.train_loss = train_loss or []
        self.best_iteration = best_iteration

    def decision_margin(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        F = np.full(X.shape[0], self.base_score)
        for tree in self.trees:
            F += self.learning_rate * tree.decision_value(X)
        return F

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.decision_margin(X))

    def split_feature_counts(self, n_features: int) -> np.ndarray:
        counts = np.zeros(n_features, dtype=np.int64)
        for tree in self.trees:
            counts += tree.split_feature_counts(n_features)
        return counts


def _weighted_logloss(F, y, w):
    return float(np.sum(w * (np.logaddexp(0.0, F) - y * F)) / np.sum(w))


def fit_boost(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray | None = None,
    config: BoostConfig = BoostConfig(),
    constraint: BoostConstraint | None = None,
    valid: tuple[np.ndarray, np.ndarray] | None = None,
    early_stopping_rounds: int | None = None,
) -> BoostModel:
    X, y, w = validate_fit_inputs(X, y, w, classification=True)
    order = canonical_order(X, y, w)
    X, y, w = X[order], y[order], w[order]
    if constraint is not None:
        constraint.reorder(order)
    n = X.shape[0]

    prior = float(np.sum(w * y) / np.sum(w))
    prior = min(max(prior, 1e-12), 1 - 1e-12)
    base = float(np.log(prior / (1.0 - prior)))

    tree_cfg = TreeConfig(
        max_depth=config.max_depth,
        min_samples_leaf=config.min_samples_leaf,
        mode="regression",
        reg_lambda=config.reg_lambda,
        min_child_weight=config.min_child_weight,
        binned=True,
        max_bins=config.max_bins,
    )
    B, edges = bin_matrix(X, config.max_bins) if config.binned else (None, None)

    F = np.full(n, base)
    trees: list[TreeModel] = []
    losses: list[float] = []
    best_auc, best_round, since_best = -np.inf, None, 0
    v_margin = None

    for t in range(config.n_trees):
        p = sigmoid(F)
        g = y - p
        h = p * (1.0 - p)
        if constraint is not None:
            dg, dh = constraint.margin_gradient(F, y)
            g = g - dg
            h = h + dh

        if config.subsample < 1.0:
            rng = substream(config.seed, "round", t)
            mask = rng.random(n) < config.subsample
            if not np.any(mask):
                mask[0] = True
        else:
            mask = slice(None)

        if config.binned:
            tree = grow_tree_binned(B[mask], edges, g[mask], h[mask], w[mask], tree_cfg)
        else:
            from .tree import fit_tree

            tree = fit_tree(X[mask], g[mask], w[mask], tree_cfg, hessians=h[mask], presorted=True)
        F = F + config.learning_rate * tree.decision_value(X)
        trees.append(tree)
        losses.append(_weighted_logloss(F, y, w))

        if valid is not None and early_stopping_rounds is not None:
            from ..metrics import auc

            if v_margin is None:
                v_margin = np.full(np.asarray(valid[0]).shape[0], base)
            v_margin = v_margin + config.learning_rate * tree.decision_value(valid[0])
            score = auc(np.asarray(valid[1], dtype=float), v_margin)
            if score > best_auc + 1e-6:
                best_auc, best_round, since_best = score, t, 0
            else:
                since_best += 1
                if since_best >= early_stopping_rounds:
                    trees = trees[: best_round + 1]
                    losses = losses[: best_round + 1]
                    break
        if constraint is not None:
            constraint.multiplier_update(F, y)

    return BoostModel(trees, config.learning_rate, base, config, losses,
                      best_iteration=best_round)
