"""Weighted L2-penalized logistic regression via damped Newton iterations."""

from __future__ import annotations

import numpy as np

from ..errors import FitError
from .base import Predictor, canonical_order, validate_fit_inputs


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LogisticModel(Predictor):
    def __init__(self, coefficients: np.ndarray, intercept: float,
                 converged: bool = True, n_iter: int = 0):
        coefficients = np.asarray(coefficients, dtype=np.float64)
        if not (np.all(np.isfinite(coefficients)) and np.isfinite(intercept)):
            raise FitError("non-finite logistic coefficients")
        self.coefficients = coefficients
        self.intercept = float(intercept)
        self.converged = converged
        self.n_iter = n_iter

    def decision_margin(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != len(self.coefficients):
            raise FitError(
                f"model fitted with {len(self.coefficients)} features, got {X.shape[1]}"
            )
        return X @ self.coefficients + self.intercept

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.decision_margin(X))


def _loss_grad_hess(beta, X1, y, w, reg, want_hess=True):
    """Weighted NLL with L2 on non-intercept coefficients (intercept is X1[:,0])."""
    m = X1 @ beta
    # log(1+e^m) - y*m, computed stably
    nll = float(np.sum(w * (np.logaddexp(0.0, m) - y * m)))
    pen = beta.copy()
    pen[0] = 0.0
    loss = nll + 0.5 * reg * float(pen @ pen)
    p = sigmoid(m)
    grad = X1.T @ (w * (p - y)) + reg * pen
    if not want_hess:
        return loss, grad, None
    s = w * p * (1.0 - p)
    H = (X1 * s[:, None]).T @ X1
    H[1:, 1:] += reg * np.eye(len(beta) - 1)
    return loss, grad, H


def fit_logistic(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray | None = None,
    reg: float = 1e-4,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> LogisticModel:
    """Newton with step halving; gradient-descent fallback on a failed solve.

    Weights are normalized to mean 1, so scaling all weights by a constant
    leaves the fit unchanged.
    """
    X, y, w = validate_fit_inputs(X, y, w, classification=True)
    order = canonical_order(X, y, w)
    X, y, w = X[order], y[order], w[order]

    n, d = X.shape
    X1 = np.hstack([np.ones((n, 1)), X])
    beta = np.zeros(d + 1)
    loss, grad, H = _loss_grad_hess(beta, X1, y, w, reg)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        if float(np.max(np.abs(grad))) <= tol:
            converged = True
            break
        step = None
        try:
            step = np.linalg.solve(H, grad)
            if not np.all(np.isfinite(step)):
                step = None
        except np.linalg.LinAlgError:
            step = None
        if step is None or float(step @ grad) <= 0:
            # non-PD or singular Hessian: plain gradient direction
            step = grad / max(1.0, float(np.max(np.abs(grad))))
        t = 1.0
        while t > 1e-12:
            cand = beta - t * step
            new_loss, new_grad, new_H = _loss_grad_hess(cand, X1, y, w, reg)
            if new_loss <= loss + 1e-12:
                beta, loss, grad, H = cand, new_loss, new_grad, new_H
                break
            t /= 2.0
        else:
            break  # no progress in any damped step
    else:
        it = max_iter
    if float(np.max(np.abs(grad))) <= tol:
        converged = True
    if not np.all(np.isfinite(beta)):
        raise FitError("logistic solver produced non-finite coefficients")
    return LogisticModel(beta[1:], beta[0], converged=converged, n_iter=it)
