"""Post-processing threshold optimizer.

Per-group (possibly randomized) decision thresholds chosen on group ROC
curves. equal_opportunity mode equalizes the favorable rate among deserving
rows (P(grant | Y=0, Z=g), whose gap is the EOD): it scans a common target
rate over the union of group-achievable rates, realizing each group's rate by
randomized mixing of the two adjacent plain thresholds, and keeps the target
with minimal total weighted misclassification. equalized_odds mode picks the
cheapest crossing of the two group ROC convex hulls (both class-conditional
rates matched); with one threshold pair per group only hull-boundary points
are representable, so targets are restricted to boundary crossings.

Raw-score convention throughout: prediction 1 (deny) iff score >= threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import FitError, UndefinedMetricError
from ..rng import substream


@dataclass(frozen=True)
class GroupThresholds:
    t_low: float
    t_high: float
    p_low: float  # probability of applying t_low (the more-denying threshold)

    def __post_init__(self):
        if not (self.t_low <= self.t_high):
            raise FitError("threshold pair must satisfy t_low <= t_high")
        if not (0.0 <= self.p_low <= 1.0):
            raise FitError("mixing probability must lie in [0,1]")

    @property
    def degenerate(self) -> bool:
        return self.t_low == self.t_high or self.p_low in (0.0, 1.0)


@dataclass(frozen=True)
class ThresholdPolicy:
    groups: dict[int, GroupThresholds]
    mode: str
    seed: int
    target: float | tuple[float, float] | None = None
    diagnostics: dict = field(default_factory=dict)


def _group_curve(s, y, w):
    """Threshold candidates ascending with favorable-rate-on-Y0 and cost.

    Candidates are the unique scores plus +inf; r(tau) = P(s < tau | y=0),
    cost(tau) = sum of weights of denied goods and granted bads.
    """
    taus = np.concatenate([np.unique(s), [np.inf]])
    good = y == 0
    r = np.array([np.sum(good & (s < t)) for t in taus], dtype=np.float64) / max(np.sum(good), 1)
    cost = np.array([
        float(np.sum(w[good & (s >= t)]) + np.sum(w[~good & (s < t)])) for t in taus
    ])
    # collapse to strictly increasing r, keeping the cheapest threshold per rate
    out_r, out_c, out_t = [], [], []
    for rr, cc, tt in zip(r, cost, taus):
        if out_r and rr == out_r[-1]:
            if cc < out_c[-1]:
                out_c[-1], out_t[-1] = cc, tt
        else:
            out_r.append(rr)
            out_c.append(cc)
            out_t.append(tt)
    return np.array(out_r), np.array(out_c), np.array(out_t)


def _mix_for_rate(curve, target):
    """(t_low, t_high, p_low, expected_cost) hitting `target` exactly in
    expectation by mixing the two thresholds adjacent to it."""
    r, c, t = curve
    j = int(np.searchsorted(r, target, side="right")) - 1
    if j >= len(r) - 1:
        return t[-1], t[-1], 1.0, float(c[-1])
    if r[j] == target:
        return t[j], t[j], 1.0, float(c[j])
    q = (target - r[j]) / (r[j + 1] - r[j])
    return t[j], t[j + 1], float(1.0 - q), float((1 - q) * c[j] + q * c[j + 1])


def _roc_hull(s, y, w):
    """Concave ROC hull vertices as (fpr, tpr, tau), tau descending."""
    taus = np.concatenate([[np.inf], np.unique(s)[::-1]])
    pos = y == 1
    wpos = float(np.sum(w[pos]))
    wneg = float(np.sum(w[~pos]))
    pts = [(float(np.sum(w[~pos & (s >= t)])) / wneg, float(np.sum(w[pos & (s >= t)])) / wpos, t)
           for t in taus]
    hull: list[tuple[float, float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1, _), (x2, y2, _) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _segment_crossings(h0, h1):
    """Intersection points of two piecewise-linear ROC boundaries."""
    out = []
    for (ax, ay, _), (bx, by, _) in zip(h0[:-1], h0[1:]):
        for (cx, cy, _), (dx, dy, _) in zip(h1[:-1], h1[1:]):
            r_x, r_y = bx - ax, by - ay
            s_x, s_y = dx - cx, dy - cy
            den = r_x * s_y - r_y * s_x
            if abs(den) < 1e-15:
                continue
            t = ((cx - ax) * s_y - (cy - ay) * s_x) / den
            u = ((cx - ax) * r_y - (cy - ay) * r_x) / den
            if -1e-12 <= t <= 1 + 1e-12 and -1e-12 <= u <= 1 + 1e-12:
                out.append((ax + t * r_x, ay + t * r_y))
    out.extend([(0.0, 0.0), (1.0, 1.0)])
    return out


def _realize_on_hull(hull, point):
    """Mix of two adjacent hull thresholds realizing `point` on the boundary."""
    px, py = point
    for (ax, ay, at), (bx, by, bt) in zip(hull[:-1], hull[1:]):
        span = max(abs(bx - ax), abs(by - ay))
        if span < 1e-15:
            continue
        q = (px - ax) / (bx - ax) if abs(bx - ax) >= abs(by - ay) else (py - ay) / (by - ay)
        if -1e-9 <= q <= 1 + 1e-9:
            # confirm the point sits on this segment
            ex, ey = ax + q * (bx - ax), ay + q * (by - ay)
            if abs(ex - px) < 1e-9 and abs(ey - py) < 1e-9:
                q = min(max(q, 0.0), 1.0)
                # larger q = further along = smaller tau = more denials
                t_low, t_high = min(at, bt), max(at, bt)
                p_low = q if bt <= at else 1.0 - q
                return GroupThresholds(t_low, t_high, float(p_low))
    return None


def fit_threshold_optimizer(
    scores: np.ndarray,
    labels: np.ndarray,
    group: np.ndarray,
    mode: str = "equal_opportunity",
    weights: np.ndarray | None = None,
    seed: int = 0,
) -> ThresholdPolicy:
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    group = np.asarray(group, dtype=np.float64)
    w = np.ones(len(scores)) if weights is None else np.asarray(weights, dtype=np.float64)
    if mode not in ("equal_opportunity", "equalized_odds"):
        raise FitError(f"unknown threshold-optimizer mode {mode!r}")
    diagnostics: dict = {}

    parts = {}
    for g in (0, 1):
        m = group == g
        if not np.any(m):
            raise UndefinedMetricError(f"group {g} empty")
        if len(np.unique(labels[m])) < 2:
            raise UndefinedMetricError(f"group {g} lacks both classes")
        parts[g] = (scores[m], labels[m], w[m])

    degenerate = [g for g in (0, 1) if len(np.unique(parts[g][0])) < 2]
    if degenerate:
        groups = {}
        for g in (0, 1):
            r, c, t = _group_curve(*parts[g])
            k = int(np.argmin(c))
            groups[g] = GroupThresholds(float(t[k]), float(t[k]), 1.0)
        diagnostics["degenerate_groups"] = degenerate
        return ThresholdPolicy(groups, mode, seed, None, diagnostics)

    if mode == "equal_opportunity":
        curves = {g: _group_curve(*parts[g]) for g in (0, 1)}
        targets = np.unique(np.concatenate([curves[0][0], curves[1][0]]))
        best = None
        for r_star in targets:
            mixes = {g: _mix_for_rate(curves[g], float(r_star)) for g in (0, 1)}
            total = mixes[0][3] + mixes[1][3]
            if best is None or total < best[0] - 1e-12:
                best = (total, float(r_star), mixes)
        total, r_star, mixes = best
        groups = {
            g: GroupThresholds(float(mixes[g][0]), float(mixes[g][1]), mixes[g][2])
            for g in (0, 1)
        }
        return ThresholdPolicy(groups, mode, seed, r_star, diagnostics)

    hulls = {g: _roc_hull(*parts[g]) for g in (0, 1)}
    candidates = _segment_crossings(hulls[0], hulls[1])
    best = None
    for (px, py) in candidates:
        realized = {g: _realize_on_hull(hulls[g], (px, py)) for g in (0, 1)}
        if any(v is None for v in realized.values()):
            continue
        cost = 0.0
        for g in (0, 1):
            s, y, wg = parts[g]
            wneg = float(np.sum(wg[y == 0]))
            wpos = float(np.sum(wg[y == 1]))
            cost += px * wneg + (1.0 - py) * wpos
        key = (cost, px, py)
        if best is None or key < best[0]:
            best = (key, (px, py), realized)
    if best is None:
        raise FitError("no common operating point found on the ROC hulls")
    _, point, realized = best
    return ThresholdPolicy(dict(realized), mode, seed, point, diagnostics)


def apply_threshold_policy(
    policy: ThresholdPolicy,
    scores: np.ndarray,
    group: np.ndarray,
    seed: int | None = None,
) -> np.ndarray:
    """Binary predictions under the per-group randomized thresholds;
    deterministic given the seed (default: the policy's own)."""
    scores = np.asarray(scores, dtype=np.float64)
    group = np.asarray(group, dtype=np.float64)
    unknown = sorted(set(np.unique(group)) - {float(g) for g in policy.groups})
    if unknown:
        raise FitError(f"no thresholds for group values {unknown}")
    rng = substream(policy.seed if seed is None else seed, "threshold-policy")
    u = rng.random(len(scores))
    preds = np.zeros(len(scores), dtype=np.int64)
    for g, th in policy.groups.items():
        m = group == g
        t = np.where(u[m] < th.p_low, th.t_low, th.t_high)
        preds[m] = (scores[m] >= t).astype(np.int64)
    return preds
