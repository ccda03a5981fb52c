"""Covariance-constrained logistic regression.

Minimizes the (optionally weighted) logistic loss subject to
|1/|S| * sum_{i in S} (Z_i - Zbar) * theta^T X_i| <= c, where S is every row
for demographic parity or the rows with the conditioning label (default the
favorable Y=0) for equal opportunity. Solved as a sequence of quadratic
penalty problems with multiplier escalation; the intercept drops out of the
constraint because sum(Z_i - Zbar) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FitError
from ..learners.base import canonical_order, validate_fit_inputs
from ..learners.logistic import LogisticModel, _loss_grad_hess, fit_logistic

PENALTY_FACTOR = 10.0
PENALTY_ROUNDS = 6
FEASIBILITY_TOL = 1e-6


@dataclass(frozen=True)
class ConstraintSpec:
    kind: str = "demographic_parity"  # or "equal_opportunity"
    c: float = np.inf
    conditioning_label: int = 0  # equal_opportunity sums over rows with this label

    def __post_init__(self):
        if self.kind not in ("demographic_parity", "equal_opportunity"):
            raise FitError(f"unknown constraint kind {self.kind!r}")
        if self.c < 0:
            raise FitError("constraint bound c must be >= 0")
        if self.conditioning_label not in (0, 1):
            raise FitError("conditioning_label must be 0 or 1")


def constraint_direction(X: np.ndarray, y: np.ndarray, z: np.ndarray,
                         spec: ConstraintSpec) -> np.ndarray:
    """Vector v with cov-term = v @ beta (features only, no intercept)."""
    if spec.kind == "equal_opportunity":
        sel = np.flatnonzero(y == spec.conditioning_label)
        if sel.size == 0:
            raise FitError("no rows carry the conditioning label")
    else:
        sel = np.arange(len(y))
    zs = z[sel]
    a = (zs - zs.mean()) / sel.size
    return X[sel].T @ a


def _solve_penalized(X1, y, w, reg, v1, c, mu, beta0, tol, max_iter):
    """Damped Newton on loss + mu * relu(|v@beta| - c)^2 (v1 has 0 intercept slot)."""

    def lgh(beta):
        loss, grad, H = _loss_grad_hess(beta, X1, y, w, reg)
        u = float(v1 @ beta)
        excess = abs(u) - c
        if excess > 0:
            loss += mu * excess * excess
            grad = grad + (2.0 * mu * excess * np.sign(u)) * v1
            H = H + (2.0 * mu) * np.outer(v1, v1)
        return loss, grad, H

    beta = beta0.copy()
    loss, grad, H = lgh(beta)
    for _ in range(max_iter):
        if float(np.max(np.abs(grad))) <= tol:
            break
        try:
            step = np.linalg.solve(H, grad)
            if not np.all(np.isfinite(step)) or float(step @ grad) <= 0:
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            step = grad / max(1.0, float(np.max(np.abs(grad))))
        t = 1.0
        while t > 1e-12:
            cand = beta - t * step
            nl, ng, nH = lgh(cand)
            if nl <= loss + 1e-12:
                beta, loss, grad, H = cand, nl, ng, nH
                break
            t /= 2.0
        else:
            break
    return beta


def fit_constrained_logistic(
    X: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    spec: ConstraintSpec,
    w: np.ndarray | None = None,
    reg: float = 1e-4,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> LogisticModel:
    """Returns a LogisticModel with a `constraint_info` dict attached
    (covariance at the solution, feasibility flag, penalty rounds used)."""
    if not np.all(np.isin(np.asarray(z, dtype=float), (0.0, 1.0))):
        raise FitError("z must be binary")
    if np.isinf(spec.c):
        model = fit_logistic(X, y, w, reg=reg, tol=tol, max_iter=max_iter)
        v = constraint_direction(np.asarray(X, dtype=float), np.asarray(y, dtype=float),
                                 np.asarray(z, dtype=float), spec)
        model.constraint_info = {
            "cov": float(v @ model.coefficients),
            "feasible": True,
            "penalty_rounds": 0,
            "degenerate": False,
        }
        return model

    X, y, w = validate_fit_inputs(X, y, w, classification=True)
    z = np.asarray(z, dtype=np.float64)
    order = canonical_order(X, y, w, z)
    X, y, w, z = X[order], y[order], w[order], z[order]

    v = constraint_direction(X, y, z, spec)
    n, d = X.shape
    X1 = np.hstack([np.ones((n, 1)), X])
    v1 = np.concatenate([[0.0], v])

    unconstrained = fit_logistic(X, y, w, reg=reg, tol=tol, max_iter=max_iter)
    beta = np.concatenate([[unconstrained.intercept], unconstrained.coefficients])
    if abs(float(v @ unconstrained.coefficients)) <= spec.c + FEASIBILITY_TOL:
        model = LogisticModel(beta[1:], beta[0], converged=unconstrained.converged,
                              n_iter=unconstrained.n_iter)
        model.constraint_info = {
            "cov": float(v @ beta[1:]),
            "feasible": True,
            "penalty_rounds": 0,
            "degenerate": False,
        }
        return model

    mu = 10.0
    rounds = 0
    for rounds in range(1, PENALTY_ROUNDS + 1):
        beta = _solve_penalized(X1, y, w, reg, v1, spec.c, mu, beta, tol, max_iter)
        if abs(float(v1 @ beta)) <= spec.c + FEASIBILITY_TOL:
            break
        mu *= PENALTY_FACTOR

    cov = float(v1 @ beta)
    feasible = abs(cov) <= spec.c + FEASIBILITY_TOL
    model = LogisticModel(beta[1:], beta[0], converged=feasible, n_iter=rounds)
    model.constraint_info = {
        "cov": cov,
        "feasible": feasible,
        "penalty_rounds": rounds,
        "degenerate": bool(np.max(np.abs(beta[1:])) < 1e-8),
    }
    return model
