"""Random forest: weighted bootstrap, per-node feature subsets, probability
averaging (hard plurality vote behind a flag)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FitError
from ..rng import substream
from .base import Predictor, canonical_order, validate_fit_inputs
from .tree import TreeConfig, TreeModel, bin_matrix, fit_tree, grow_tree_binned


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 8
    min_samples_leaf: int = 5
    feature_subsample: float = 0.35  # fraction of features tried per node
    bootstrap: bool = True
    hard_vote: bool = False
    seed: int = 0
    binned: bool = True
    max_bins: int = 256

    def __post_init__(self):
        if self.n_trees < 1:
            raise FitError("n_trees must be >= 1")
        if not (0 < self.feature_subsample <= 1):
            raise FitError("feature_subsample must be in (0, 1]")


class ForestModel(Predictor):
    def __init__(self, trees: list[TreeModel], config: ForestConfig):
        self.trees = trees
        self.config = config

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        votes = np.stack([t.decision_value(X) for t in self.trees])
        if self.config.hard_vote:
            return np.mean(votes >= 0.5, axis=0)
        return np.mean(votes, axis=0)

    def split_feature_counts(self, n_features: int) -> np.ndarray:
        counts = np.zeros(n_features, dtype=np.int64)
        for tree in self.trees:
            counts += tree.split_feature_counts(n_features)
        return counts


def fit_forest(X, y, w=None, config: ForestConfig = ForestConfig()) -> ForestModel:
    X, y, w = validate_fit_inputs(X, y, w, classification=True)
    order = canonical_order(X, y, w)
    X, y, w = X[order], y[order], w[order]
    n, d = X.shape
    k = max(1, int(round(config.feature_subsample * d)))
    tree_cfg = TreeConfig(
        max_depth=config.max_depth,
        min_samples_leaf=config.min_samples_leaf,
        mode="classification",
        binned=config.binned,
        max_bins=config.max_bins,
    )

    B = edges = None
    if config.binned:
        B, edges = bin_matrix(X, config.max_bins)

    trees: list[TreeModel] = []
    p = w / w.sum()
    for t in range(config.n_trees):
        rng = substream(config.seed, "tree", t)
        node_rng = substream(config.seed, "features", t)

        def subset(_node_id: int, rng=node_rng) -> np.ndarray:
            return np.sort(rng.choice(d, size=k, replace=False)) if k < d else np.arange(d)

        if config.bootstrap:
            draw = rng.choice(n, size=n, replace=True, p=p)
            counts = np.bincount(draw, minlength=n).astype(np.float64)
            rows = np.flatnonzero(counts)
            if config.binned:
                trees.append(
                    grow_tree_binned(B[rows], edges, y[rows], None, counts[rows], tree_cfg, subset)
                )
            else:
                trees.append(
                    fit_tree(X[rows], y[rows], counts[rows], tree_cfg,
                             feature_indices_fn=subset, presorted=True)
                )
        else:
            if config.binned:
                trees.append(grow_tree_binned(B, edges, y, None, w, tree_cfg, subset))
            else:
                trees.append(fit_tree(X, y, w, tree_cfg, feature_indices_fn=subset, presorted=True))
    return ForestModel(trees, config)
