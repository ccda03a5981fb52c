"""Fairness-gated model selection.

A scalar objective that leaves performance untouched while the fairness gap
stays within budget and penalizes excess gap steeply otherwise, plus a seeded
random-search tuner that maximizes it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..errors import FitError
from ..rng import substream

DEFAULT_FAIRNESS_BUDGET = 0.05
DEFAULT_PENALTY_SCALE = 100.0


def fairness_objective(
    performance: float,
    fairness_gap: float,
    budget: float = DEFAULT_FAIRNESS_BUDGET,
    penalty: float = DEFAULT_PENALTY_SCALE,
) -> float:
    """performance when |gap| <= budget, else performance minus
    penalty * (excess over budget). Higher is better."""
    gap = abs(float(fairness_gap))
    if gap <= budget:
        return float(performance)
    return float(performance) - penalty * (gap - budget)


@dataclass
class TrialResult:
    index: int
    params: dict[str, Any]
    objective: float | None
    performance: float | None = None
    fairness_gap: float | None = None
    error: str | None = None


@dataclass
class TuneResult:
    best_params: dict[str, Any]
    best_objective: float
    best_index: int
    trials: list[TrialResult] = field(default_factory=list)


def _draw(space: dict[str, Any], rng: np.random.Generator) -> dict[str, Any]:
    params = {}
    for name, spec in space.items():
        if isinstance(spec, list):
            params[name] = spec[int(rng.integers(len(spec)))]
        elif isinstance(spec, tuple) and len(spec) in (2, 3):
            lo, hi = spec[0], spec[1]
            log = len(spec) == 3 and spec[2] == "log"
            if isinstance(lo, int) and isinstance(hi, int) and not log:
                params[name] = int(rng.integers(lo, hi + 1))
            elif log:
                params[name] = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
            else:
                params[name] = float(rng.uniform(lo, hi))
        else:
            params[name] = spec  # constant
    return params


def tune(
    evaluate: Callable[[dict[str, Any]], tuple[float, float]],
    space: dict[str, Any],
    n_trials: int,
    seed: int = 0,
    budget: float = DEFAULT_FAIRNESS_BUDGET,
    penalty: float = DEFAULT_PENALTY_SCALE,
) -> TuneResult:
    """Random search over `space`; `evaluate(params)` returns
    (performance, fairness_gap). Trial i draws from substream(seed,"tune",i)
    so results are reproducible and independent of n_trials for earlier
    trials. Ties broken by the earlier trial; failed trials are logged and
    skipped. All trials failing is an error."""
    if n_trials < 1:
        raise FitError("n_trials must be >= 1")
    trials: list[TrialResult] = []
    best: TrialResult | None = None
    for i in range(n_trials):
        params = _draw(space, substream(seed, "tune", i))
        try:
            performance, gap = evaluate(params)
            obj = fairness_objective(performance, gap, budget, penalty)
            trial = TrialResult(i, params, obj, float(performance), float(gap))
        except Exception as exc:  # noqa: BLE001 - trial failures are data
            trial = TrialResult(i, params, None, error=f"{type(exc).__name__}: {exc}")
        trials.append(trial)
        if trial.objective is not None and (best is None or trial.objective > best.objective):
            best = trial
    if best is None:
        raise FitError(
            "all tuning trials failed; first error: " + (trials[0].error or "unknown")
        )
    return TuneResult(dict(best.params), best.objective, best.index, trials)
