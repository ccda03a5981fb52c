"""Accept/reject simulation over a fully labeled dataset.

A small disjoint subsample trains a gating model on its own feature subset;
the remaining pool is split into accepts and rejects by thresholding the
gate's default probability. True labels of rejected rows stay attached to the
scenario as hidden ground truth: strategies must never read them (they are
stored under a private name and surfaced only by the evaluator), while an
unbiased holdout carved out before any of this supports honest scoring.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError
from ..learners import BoostConfig, fit_boost, fit_logistic
from ..rng import substream
from ..tabular import PreprocessPlan, Table, apply_preprocess, fit_preprocess

POLICY_THRESHOLD_DEFAULT = 0.4


def partition_features(names: list[str], policy_fraction: float = 0.3,
                       policy_features: list[str] | None = None) -> tuple[list[str], list[str]]:
    """Split feature names into (policy, study) groups.

    With an explicit list the split is taken verbatim; otherwise names are
    ranked by a stable content hash and the lowest `policy_fraction` go to
    the gate, so the partition depends only on the schema.
    """
    if policy_features is not None:
        policy = [n for n in names if n in set(policy_features)]
        missing = sorted(set(policy_features) - set(names))
        if missing:
            raise DataError(f"policy features not in schema: {missing}")
    else:
        if not (0 < policy_fraction < 1):
            raise DataError("policy_fraction must be in (0, 1)")
        ranked = sorted(names, key=lambda n: hashlib.sha256(n.encode()).hexdigest())
        n_policy = max(1, int(round(policy_fraction * len(names))))
        n_policy = min(n_policy, len(names) - 1)
        policy = ranked[:n_policy]
    study = [n for n in names if n not in set(policy)]
    if not policy or not study:
        raise DataError("feature partition left one side empty")
    return sorted(policy), study


@dataclass
class RejectScenario:
    policy_model: object
    policy_threshold: float
    policy_features: list[str]
    study_features: list[str]
    plan: PreprocessPlan
    X_pool: np.ndarray
    accept_mask: np.ndarray
    y_accepted: np.ndarray
    X_holdout: np.ndarray
    y_holdout: np.ndarray
    summary: dict
    seed: int
    _reject_labels: np.ndarray = field(repr=False, default=None)

    @property
    def n_pool(self) -> int:
        return self.X_pool.shape[0]

    @property
    def X_accepted(self) -> np.ndarray:
        return self.X_pool[self.accept_mask]

    @property
    def X_rejected(self) -> np.ndarray:
        return self.X_pool[~self.accept_mask]

    def manifest(self) -> str:
        """JSON record sufficient to reproduce the scenario split."""
        return json.dumps({
            "seed": self.seed,
            "policy_threshold": self.policy_threshold,
            "policy_features": self.policy_features,
            "study_features": self.study_features,
            "accept_indices": np.flatnonzero(self.accept_mask).tolist(),
            "summary": self.summary,
        }, indent=2)


def _stratified_sample(y: np.ndarray, fraction: float, rng) -> np.ndarray:
    """Sorted row indices of a class-stratified random sample."""
    take = []
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        k = int(round(fraction * len(idx)))
        take.append(rng.permutation(idx)[:k])
    return np.sort(np.concatenate(take))


def simulate_rejection(
    t: Table,
    policy_features: list[str] | None = None,
    policy_fraction: float = 0.3,
    threshold: float = POLICY_THRESHOLD_DEFAULT,
    policy_sample: float = 0.1,
    holdout_fraction: float = 0.2,
    seed: int = 0,
    policy_config: BoostConfig | None = None,
    balance_policy: bool = True,
) -> RejectScenario:
    names = [c.name for c in t.feature_specs()]
    policy_cols, study_cols = partition_features(names, policy_fraction, policy_features)
    y = t.labels()

    hold_idx = _stratified_sample(y, holdout_fraction, substream(seed, "ri-holdout"))
    rest_idx = np.setdiff1d(np.arange(t.n_rows), hold_idx)
    gate_local = _stratified_sample(y[rest_idx], policy_sample, substream(seed, "ri-policy"))
    gate_idx = rest_idx[gate_local]
    pool_idx = np.setdiff1d(rest_idx, gate_idx)

    gate_table = t.select_rows(gate_idx).select_features(policy_cols)
    gate_plan = fit_preprocess(gate_table)
    Xg, _ = apply_preprocess(gate_plan, gate_table)
    yg = gate_table.labels()
    wg = None
    if balance_policy:
        # class-balanced gate: scores read as "risk relative to an even prior",
        # so a mid-range threshold stays meaningful at low base rates
        counts = np.bincount(yg.astype(np.int64), minlength=2).astype(np.float64)
        if counts.min() == 0:
            raise DataError("policy sample lost one class; increase policy_sample")
        wg = (len(yg) / (2.0 * counts))[yg.astype(np.int64)]
    if policy_config is None:
        # scorecard gate: a linear boundary holds still across reruns on a
        # sample this small, where a boosted gate's threshold crossing drifts
        policy_model = fit_logistic(Xg, yg, w=wg)
    else:
        policy_model = fit_boost(Xg, yg, w=wg, config=policy_config)

    pool_policy = t.select_rows(pool_idx).select_features(policy_cols)
    Xp, _ = apply_preprocess(gate_plan, pool_policy)
    scores = policy_model.predict_proba(Xp)
    accept_mask = scores < threshold
    if accept_mask.all():
        raise DataError("policy threshold above every score: all rows accepted")
    if not accept_mask.any():
        raise DataError("policy threshold below every score: all rows rejected")

    pool_study = t.select_rows(pool_idx).select_features(study_cols)
    plan = fit_preprocess(pool_study)
    X_pool, _ = apply_preprocess(plan, pool_study)
    X_hold, _ = apply_preprocess(plan, t.select_rows(hold_idx).select_features(study_cols))

    y_pool = y[pool_idx]
    summary = {
        "accept_share": float(np.mean(accept_mask)),
        "reject_share": float(np.mean(~accept_mask)),
        "accept_default_rate": float(np.mean(y_pool[accept_mask])),
        "reject_default_rate": float(np.mean(y_pool[~accept_mask])),
        "n_pool": int(len(pool_idx)),
        "n_holdout": int(len(hold_idx)),
        "n_policy_sample": int(len(gate_idx)),
    }
    return RejectScenario(
        policy_model=policy_model,
        policy_threshold=float(threshold),
        policy_features=policy_cols,
        study_features=study_cols,
        plan=plan,
        X_pool=X_pool,
        accept_mask=accept_mask,
        y_accepted=y_pool[accept_mask].copy(),
        X_holdout=X_hold,
        y_holdout=y[hold_idx].copy(),
        summary=summary,
        seed=seed,
        _reject_labels=y_pool[~accept_mask].copy(),
    )
