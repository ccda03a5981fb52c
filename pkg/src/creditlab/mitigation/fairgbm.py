"""Fairness-constrained gradient boosting.

The group-rate constraint is made differentiable by using sigmoid(margin) as
a soft prediction inside the group rates: demographic parity proxies the
positive-prediction (denial) rate per group; equal opportunity proxies the
denial rate among rows with the conditioning label (default Y=0: the rate of
refusing deserving applicants, whose gap is the EOD). Two one-sided
multipliers follow projected dual ascent once per boosting round.
"""

from __future__ import annotations

import numpy as np

from ..errors import FitError
from ..learners.boosting import BoostConfig, BoostConstraint, BoostModel, fit_boost
from ..learners.logistic import sigmoid
from .constrained import ConstraintSpec


class GroupRateConstraint(BoostConstraint):
    def __init__(self, z: np.ndarray, y: np.ndarray, spec: ConstraintSpec, step: float):
        self._z = np.asarray(z, dtype=np.float64)
        self._y = np.asarray(y, dtype=np.float64)
        self._spec = spec
        self._select()
        if self.sel1.size == 0 or self.sel0.size == 0:
            raise FitError("constraint needs both groups in the conditioning set")
        self.step = float(step)
        self.lam_pos = 0.0  # active when rate(z=1) > rate(z=0)
        self.lam_neg = 0.0
        self.trajectory: list[tuple[float, float]] = []

    def _select(self) -> None:
        if self._spec.kind == "equal_opportunity":
            base = self._y == self._spec.conditioning_label
        else:
            base = np.ones(len(self._y), dtype=bool)
        self.sel1 = np.flatnonzero(base & (self._z == 1))
        self.sel0 = np.flatnonzero(base & (self._z == 0))

    def reorder(self, order: np.ndarray) -> None:
        self._z = self._z[order]
        self._y = self._y[order]
        self._select()

    def _rates(self, F: np.ndarray) -> tuple[float, float]:
        p = sigmoid(F)
        return float(p[self.sel1].mean()), float(p[self.sel0].mean())

    def penalty(self, F: np.ndarray) -> float:
        r1, r0 = self._rates(F)
        return self.lam_pos * (r1 - r0) + self.lam_neg * (r0 - r1)

    def margin_gradient(self, F: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        p = sigmoid(F)
        sp = p * (1.0 - p)
        coef = self.lam_pos - self.lam_neg
        dg = np.zeros_like(F)
        dg[self.sel1] = coef * sp[self.sel1] / self.sel1.size
        dg[self.sel0] = -coef * sp[self.sel0] / self.sel0.size
        return dg, np.zeros_like(F)

    def multiplier_update(self, F: np.ndarray, y: np.ndarray) -> None:
        r1, r0 = self._rates(F)
        self.lam_pos = max(0.0, self.lam_pos + self.step * (r1 - r0))
        self.lam_neg = max(0.0, self.lam_neg + self.step * (r0 - r1))
        self.trajectory.append((self.lam_pos, self.lam_neg))


def fit_fairgbm(
    X: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    config: BoostConfig = BoostConfig(),
    spec: ConstraintSpec = ConstraintSpec(kind="equal_opportunity"),
    multiplier_step: float = 0.1,
    w: np.ndarray | None = None,
) -> BoostModel:
    """fit_boost with the group-rate constraint hook; the returned model
    carries the multiplier trajectory."""
    y_arr = np.asarray(y, dtype=np.float64)
    z_arr = np.asarray(z, dtype=np.float64)
    if not np.all(np.isin(z_arr, (0.0, 1.0))):
        raise FitError("z must be binary")
    hook = GroupRateConstraint(z_arr, y_arr, spec, multiplier_step)
    model = fit_boost(X, y_arr, w, config, constraint=hook)
    model.multiplier_trajectory = list(hook.trajectory)
    return model
