"""Counterfactual explanations: minimal feature changes that flip a decision.

Two generators over the same discretized action space (quantile steps for
numeric features, toggles for binary categorical ones; multi-category and
sensitive features are immutable):

- counterfactual_search: depth-bounded tree search returning the Pareto
  front under (number of changes, largest relative change), pruned by
  dominance and, for linear models, by additive margin bounds;
- diverse_counterfactuals: seeded multi-restart local search that returns k
  valid points trading proximity to the reference against mutual diversity.

Every emitted counterfactual is re-scored through the pipeline before being
returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from ..errors import DataError
from ..learners import LogisticModel
from ..rng import substream
from .pipeline import Columns, ScoringPipeline, tile_row

REL_EPS = 1e-9
GRID_STEPS = 19
MAX_CHANGES = 5


@dataclass
class Counterfactual:
    changes: dict  # feature -> new value, original scale
    probability: float
    label: float
    n_changes: int
    max_relative_change: float
    distance: float

    @property
    def costs(self) -> tuple[int, float, float]:
        return (self.n_changes, self.max_relative_change, self.distance)


@dataclass
class CounterfactualSet:
    points: list[Counterfactual]
    diagnostics: dict = field(default_factory=dict)


def _relative_change(ref, new, kind: str) -> float:
    if kind != "numeric":
        return 1.0
    return abs(float(new) - float(ref)) / (abs(float(ref)) + REL_EPS)


def build_action_grids(
    pipeline: ScoringPipeline,
    data: Columns,
    mutable: list[str],
    row: dict,
    grid_steps: int = GRID_STEPS,
) -> dict[str, list]:
    """Candidate new values per mutable feature, current value excluded,
    ordered by increasing relative change."""
    plan = pipeline.plan
    grids: dict[str, list] = {}
    for name in mutable:
        if name not in pipeline.kind_of:
            raise DataError(f"unknown feature {name!r}")
        if name == plan.sensitive_name:
            raise DataError(f"sensitive feature {name!r} is immutable")
        kind = pipeline.kind_of[name]
        if kind == "numeric":
            col = np.asarray(data[name], dtype=np.float64)
            col = col[~np.isnan(col)]
            qs = np.linspace(0.0, 1.0, grid_steps + 2)[1:-1]
            values = [float(v) for v in np.unique(np.quantile(col, qs))]
            ref = float(row[name])
            values = [v for v in values if v != ref]
            values.sort(key=lambda v: _relative_change(ref, v, "numeric"))
        else:
            vocab = plan.categorical[name].vocabulary
            if len(vocab) > 2:
                raise DataError(
                    f"categorical feature {name!r} has {len(vocab)} categories; "
                    "only binary categorical features are mutable"
                )
            values = [v for v in vocab if v != row[name]]
        grids[name] = values
    return grids


def _embed(pipeline: ScoringPipeline, row: dict, assignment: dict) -> np.ndarray:
    """Point in standardized/indicator space: numeric features as z-scores,
    categorical as agreement-with-reference indicators."""
    plan = pipeline.plan
    out = np.empty(len(pipeline.feature_names))
    for j, name in enumerate(pipeline.feature_names):
        value = assignment.get(name, row[name])
        if pipeline.kind_of[name] == "numeric":
            st = plan.numeric.get(name)
            mean, std = (st.mean, st.std) if st is not None else (0.0, 1.0)
            v = float(value)
            if np.isnan(v):
                v = st.impute if st is not None else 0.0
            out[j] = (v - mean) / std
        else:
            out[j] = 1.0 if value == row[name] else 0.0
    return out


def _score_assignment(pipeline: ScoringPipeline, row: dict, assignment: dict) -> float:
    merged = dict(row)
    merged.update(assignment)
    return float(pipeline.predict_proba(tile_row(merged, 1))[0])


def _make_point(pipeline: ScoringPipeline, row: dict, assignment: dict,
                desired: float) -> Counterfactual | None:
    prob = _score_assignment(pipeline, row, assignment)
    label = float(prob >= pipeline.threshold)
    if label != desired:
        return None
    mrc = max(
        _relative_change(row[n], v, pipeline.kind_of[n]) for n, v in assignment.items()
    )
    dist = float(np.linalg.norm(
        _embed(pipeline, row, assignment) - _embed(pipeline, row, {})
    ))
    return Counterfactual(dict(assignment), prob, label, len(assignment), mrc, dist)


def counterfactual_search(
    pipeline: ScoringPipeline,
    row: dict,
    data: Columns,
    mutable: list[str],
    max_changes: int = MAX_CHANGES,
    grid_steps: int = GRID_STEPS,
    desired_label: float | None = None,
    max_nodes: int = 200_000,
) -> CounterfactualSet:
    current = float(pipeline.predict_label(tile_row(row, 1))[0])
    if desired_label is not None and float(desired_label) == current:
        return CounterfactualSet([], {"already_desired": True})
    desired = 1.0 - current if desired_label is None else float(desired_label)
    grids = build_action_grids(pipeline, data, mutable, row, grid_steps)
    features = [f for f in mutable if grids[f]]
    max_changes = min(max_changes, len(features))

    # additive margin deltas enable branch-and-bound for linear models
    margin_mode = isinstance(pipeline.model, LogisticModel)
    deltas: dict[str, list[float]] = {}
    if margin_mode:
        base_margin = float(pipeline.predict(tile_row(row, 1), "margin")[0])
        for name in features:
            ds = []
            for v in grids[name]:
                merged = dict(row)
                merged[name] = v
                ds.append(float(pipeline.predict(tile_row(merged, 1), "margin")[0]) - base_margin)
            deltas[name] = ds
        need_up = desired == 1.0
        thr_margin = float(np.log(pipeline.threshold / (1.0 - pipeline.threshold)))
        best_delta = {
            name: (max(ds) if need_up else min(ds)) for name, ds in deltas.items()
        }

    front: list[Counterfactual] = []
    diagnostics: dict = {"nodes_visited": 0}

    def dominated(k: int, mrc: float) -> bool:
        return any(p.n_changes <= k and p.max_relative_change <= mrc for p in front)

    def admit(point: Counterfactual) -> None:
        if dominated(point.n_changes, point.max_relative_change):
            return
        front[:] = [
            p for p in front
            if not (point.n_changes <= p.n_changes
                    and point.max_relative_change <= p.max_relative_change)
        ]
        front.append(point)

    def margin_reachable(i: int, used: int, cur_margin: float) -> bool:
        budget = max_changes - used
        gains = sorted(
            (best_delta[f] for f in features[i:]),
            reverse=desired == 1.0,
        )[:budget]
        potential = cur_margin + sum(g for g in gains if (g > 0) == (desired == 1.0) or g == 0)
        return potential >= thr_margin if desired == 1.0 else potential < thr_margin

    def walk(i: int, assignment: dict, mrc: float, cur_margin: float) -> None:
        diagnostics["nodes_visited"] += 1
        if diagnostics["nodes_visited"] > max_nodes:
            diagnostics["node_budget_exhausted"] = True
            return
        if assignment:
            if margin_mode:
                label = float(cur_margin >= thr_margin)
            else:
                label = float(_score_assignment(pipeline, row, assignment) >= pipeline.threshold)
            if label == desired:
                point = _make_point(pipeline, row, assignment, desired)
                if point is not None:
                    admit(point)
                    return  # deeper nodes cost strictly more on both objectives
        if i >= len(features) or len(assignment) >= max_changes:
            return
        if dominated(len(assignment) + 1, mrc):
            return
        if margin_mode and not margin_reachable(i, len(assignment), cur_margin):
            return
        name = features[i]
        walk(i + 1, assignment, mrc, cur_margin)
        kind = pipeline.kind_of[name]
        for j, v in enumerate(grids[name]):
            rc = _relative_change(row[name], v, kind)
            if dominated(len(assignment) + 1, max(mrc, rc)):
                continue
            assignment[name] = v
            walk(i + 1, assignment,
                 max(mrc, rc),
                 cur_margin + (deltas[name][j] if margin_mode else 0.0))
            del assignment[name]

    base_margin_val = base_margin if margin_mode else 0.0
    walk(0, {}, 0.0, base_margin_val)
    if not front:
        diagnostics["no_counterfactual"] = (
            f"no flip within {max_changes} changes on the action grids"
        )
    front.sort(key=lambda p: (p.n_changes, p.max_relative_change, p.distance))
    return CounterfactualSet(front, diagnostics)


def diverse_counterfactuals(
    pipeline: ScoringPipeline,
    row: dict,
    data: Columns,
    mutable: list[str],
    k: int = 3,
    proximity_weight: float = 0.5,
    diversity_weight: float = 1.0,
    seed: int = 0,
    n_restarts: int | None = None,
    max_changes: int = MAX_CHANGES,
    grid_steps: int = GRID_STEPS,
    hill_steps: int = 30,
) -> CounterfactualSet:
    """k prediction-flipping points balancing closeness to the reference
    (weight proximity_weight) against mutual spread (weight diversity_weight),
    drawn from seeded random-restart hill climbs over the action grids."""
    if k < 1:
        raise DataError("k must be >= 1")
    current = float(pipeline.predict_label(tile_row(row, 1))[0])
    desired = 1.0 - current
    grids = build_action_grids(pipeline, data, mutable, row, grid_steps)
    features = [f for f in mutable if grids[f]]
    if not features:
        return CounterfactualSet([], {"requested": k, "found": 0})
    restarts = n_restarts if n_restarts is not None else max(24, 8 * k)

    def toward(prob: float) -> float:
        return prob if desired == 1.0 else -prob

    candidates: list[Counterfactual] = []
    seen: dict[tuple, int] = {}
    for r in range(restarts):
        rng = substream(seed, "dice", r)
        size = int(rng.integers(1, min(max_changes, len(features)) + 1))
        chosen = list(rng.choice(len(features), size=size, replace=False))
        assignment = {
            features[i]: grids[features[i]][int(rng.integers(len(grids[features[i]])))]
            for i in chosen
        }
        prob = _score_assignment(pipeline, row, assignment)
        for _ in range(hill_steps):
            if (prob >= pipeline.threshold) == (desired == 1.0):
                break
            name = features[int(rng.integers(len(features)))]
            trial = dict(assignment)
            trial[name] = grids[name][int(rng.integers(len(grids[name])))]
            if len(trial) > max_changes:
                continue
            p2 = _score_assignment(pipeline, row, trial)
            if toward(p2) > toward(prob):
                assignment, prob = trial, p2
        point = _make_point(pipeline, row, assignment, desired)
        if point is None:
            continue
        key = tuple(sorted(point.changes.items()))
        if key in seen:
            seen[key] += 1
            if diversity_weight != 0.0:
                continue  # duplicates only useful when diversity is off
        else:
            seen[key] = 1
        candidates.append(point)

    diagnostics: dict = {"requested": k, "found": len(candidates)}
    if len(candidates) <= k:
        dup = sum(c - 1 for c in seen.values())
        if diversity_weight == 0.0 and dup:
            diagnostics["duplicates_returned"] = dup
        return CounterfactualSet(candidates, diagnostics)

    emb = [_embed(pipeline, row, c.changes) for c in candidates]
    pd_cache = np.array([[float(np.linalg.norm(a - b)) for b in emb] for a in emb])

    def subset_score(idx: tuple[int, ...]) -> float:
        prox = sum(candidates[i].distance for i in idx)
        div = sum(pd_cache[a][b] for a, b in combinations(idx, 2))
        return -proximity_weight * prox + diversity_weight * div

    if comb(len(candidates), k) <= 20000:
        best = max(combinations(range(len(candidates)), k), key=subset_score)
    else:
        chosen_idx = [int(np.argmin([c.distance for c in candidates]))]
        while len(chosen_idx) < k:
            rest = [i for i in range(len(candidates)) if i not in chosen_idx]
            gains = [
                -proximity_weight * candidates[i].distance
                + diversity_weight * sum(pd_cache[i][j] for j in chosen_idx)
                for i in rest
            ]
            chosen_idx.append(rest[int(np.argmax(gains))])
        best = tuple(chosen_idx)
    picked = [candidates[i] for i in sorted(best)]
    dup = sum(1 for a, b in combinations(best, 2) if candidates[a].changes == candidates[b].changes)
    if dup:
        diagnostics["duplicates_returned"] = dup
    return CounterfactualSet(picked, diagnostics)
