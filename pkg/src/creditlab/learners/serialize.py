"""Model serialization to a documented JSON layout.

Layout: {"type": ..., "config": {...}, "params": {...}, "plan_hash": ...}.
Trees are stored as parallel node arrays; floats round-trip exactly via
Python's repr-based JSON float encoding.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

from ..errors import ConfigError
from .base import Predictor
from .boosting import BoostConfig, BoostModel
from .forest import ForestConfig, ForestModel
from .logistic import LogisticModel
from .tree import TreeConfig, TreeModel


def _tree_params(t: TreeModel) -> dict:
    return {
        "feature": t.feature.tolist(),
        "threshold": t.threshold.tolist(),
        "left": t.left.tolist(),
        "right": t.right.tolist(),
        "value": t.value.tolist(),
    }


def _tree_from(params: dict, config: TreeConfig) -> TreeModel:
    return TreeModel(params["feature"], params["threshold"], params["left"],
                     params["right"], params["value"], config)


def model_to_dict(m: Predictor, plan_hash: str | None = None) -> dict:
    if isinstance(m, LogisticModel):
        doc = {
            "type": "logistic",
            "config": {},
            "params": {
                "coefficients": m.coefficients.tolist(),
                "intercept": m.intercept,
                "converged": m.converged,
                "n_iter": m.n_iter,
            },
        }
    elif isinstance(m, TreeModel):
        doc = {"type": "tree", "config": asdict(m.config), "params": _tree_params(m)}
    elif isinstance(m, ForestModel):
        doc = {
            "type": "forest",
            "config": asdict(m.config),
            "params": {"trees": [_tree_params(t) for t in m.trees],
                       "tree_config": asdict(m.trees[0].config) if m.trees else None},
        }
    elif isinstance(m, BoostModel):
        doc = {
            "type": "boost",
            "config": asdict(m.config),
            "params": {
                "trees": [_tree_params(t) for t in m.trees],
                "tree_config": asdict(m.trees[0].config) if m.trees else None,
                "learning_rate": m.learning_rate,
                "base_score": m.base_score,
            },
        }
    else:
        raise ConfigError(f"cannot serialize model type {type(m).__name__}")
    doc["plan_hash"] = plan_hash
    return doc


def model_from_dict(doc: dict) -> Predictor:
    kind = doc.get("type")
    params = doc.get("params", {})
    if kind == "logistic":
        return LogisticModel(params["coefficients"], params["intercept"],
                             converged=params.get("converged", True),
                             n_iter=params.get("n_iter", 0))
    if kind == "tree":
        return _tree_from(params, TreeConfig(**doc["config"]))
    if kind == "forest":
        cfg = ForestConfig(**doc["config"])
        tc = TreeConfig(**params["tree_config"]) if params.get("tree_config") else TreeConfig()
        return ForestModel([_tree_from(p, tc) for p in params["trees"]], cfg)
    if kind == "boost":
        cfg = BoostConfig(**doc["config"])
        tc = TreeConfig(**params["tree_config"]) if params.get("tree_config") else TreeConfig(mode="regression")
        return BoostModel([_tree_from(p, tc) for p in params["trees"]],
                          params["learning_rate"], params["base_score"], cfg)
    raise ConfigError(f"unknown model type {kind!r}")


def save_model(m: Predictor, path: str | Path, plan_hash: str | None = None) -> None:
    Path(path).write_text(json.dumps(model_to_dict(m, plan_hash), indent=1))


def load_model(path: str | Path) -> tuple[Predictor, str | None]:
    doc = json.loads(Path(path).read_text())
    return model_from_dict(doc), doc.get("plan_hash")
