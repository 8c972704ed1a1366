"""Logistic regression: plain maximum likelihood (IRLS) and penalized fits
(lasso, elastic net, ridge) by coordinate descent on the IRLS quadratic
approximation.

Penalized fits standardize the features internally, leave the intercept
unpenalized and report coefficients on the original feature scale.  The
penalties, applied to the standardized slopes b, are

    lasso        sum |b|
    elastic net  sum (1 - a)/2 b^2 + a |b|
    ridge        sum b^2

and the fit maximizes ``loglik - lam * penalty`` with the log-likelihood
summed (not averaged) over subjects.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, log_expit

from ..data import Dataset, as_matrix, fit_standardizer
from ._cd import cd_wls

FORMAT_VERSION = 1
WEIGHT_FLOOR = 1e-10
# inner coordinate-descent sweeps per Newton step; the outer line search keeps
# the objective monotone, so an inexact inner solve only costs extra outer steps
INNER_SWEEPS = 250
MAX_INNER_SWEEPS = 10000
PENALTIES = ("none", "lasso", "elastic-net", "ridge")
_ALIASES = {"en": "elastic-net", "elasticnet": "elastic-net", "elastic_net": "elastic-net"}


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LogisticModel:
    intercept: float
    coef: np.ndarray
    penalty: str = "none"
    lam: float = 0.0
    alpha: float = 1.0
    converged: bool = True
    n_iter: int = 0
    objective_trace: tuple = field(default=(), repr=False)

    def decision_function(self, x) -> np.ndarray:
        """Linear predictor (log-odds)."""
        return self.intercept + as_matrix(x) @ self.coef

    def predict_proba(self, x) -> np.ndarray:
        return expit(self.decision_function(x))

    score = predict_proba

    @property
    def n_nonzero(self) -> int:
        return int(np.count_nonzero(self.coef))

    def selected(self) -> np.ndarray:
        return self.coef != 0

    def to_dict(self) -> dict:
        return {
            "format": "qbplab.LogisticModel",
            "version": FORMAT_VERSION,
            "intercept": float(self.intercept),
            "coef": [float(c) for c in self.coef],
            "penalty": self.penalty,
            "lam": float(self.lam),
            "alpha": float(self.alpha),
            "converged": bool(self.converged),
            "n_iter": int(self.n_iter),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LogisticModel":
        if d.get("format") != "qbplab.LogisticModel" or d.get("version") != FORMAT_VERSION:
            raise ValueError("not a serialized LogisticModel (version 1)")
        return cls(d["intercept"], np.array(d["coef"], dtype=float), d["penalty"],
                   d["lam"], d["alpha"], d["converged"], d["n_iter"])


def log_likelihood(intercept, coef, x, y) -> float:
    eta = intercept + as_matrix(x) @ np.asarray(coef, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.sum(y * log_expit(eta) + (1 - y) * log_expit(-eta)))


def score_vector(intercept, coef, x, y) -> np.ndarray:
    """Gradient of the log-likelihood in (intercept, coef)."""
    x = as_matrix(x)
    resid = np.asarray(y, dtype=float) - expit(intercept + x @ np.asarray(coef, dtype=float))
    return np.r_[resid.sum(), x.T @ resid]


def _prepare(ds: Dataset, who: str):
    ds.require_complete(who)
    ds.require_both_classes()
    st = fit_standardizer(ds.features)
    return st.transform(ds.features), ds.labels.astype(float), st


def _unstandardize(b0, b, st):
    scale = np.where(st.sd > 0, st.sd, 1.0)
    coef = np.where(st.sd > 0, b / scale, 0.0)
    return float(b0 - np.sum(coef * st.mean)), coef


def fit_logistic(ds: Dataset, max_iter: int = 100, tol: float = 1e-10) -> LogisticModel:
    """Maximum-likelihood logistic regression by iteratively reweighted least squares.

    Stops when the Newton step is negligible, or when the log-likelihood
    improves by less than ``tol`` and the step is small.  Under
    (quasi-)separation the iterate diverges; the last iterate is returned
    with ``converged=False`` and a :class:`ConvergenceWarning`.
    """
    xs, y, st = _prepare(ds, "logistic regression")
    active = st.sd > 0
    Z = np.column_stack([np.ones(ds.n), xs[:, active]])
    ybar = y.mean()
    beta = np.zeros(Z.shape[1])
    beta[0] = np.log(ybar / (1 - ybar))
    ll = log_likelihood(beta[0], beta[1:], Z[:, 1:], y)
    trace = [ll]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        eta = Z @ beta
        p = expit(eta)
        w = np.maximum(p * (1 - p), WEIGHT_FLOOR)
        grad = Z.T @ (y - p)
        H = Z.T @ (Z * w[:, None])
        try:
            step = np.linalg.solve(H, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, grad, rcond=None)[0]
        t = 1.0
        for _ in range(40):
            cand = beta + t * step
            ll_new = log_likelihood(cand[0], cand[1:], Z[:, 1:], y)
            if ll_new >= ll:
                break
            t *= 0.5
        else:
            converged = True  # no ascent possible from here
            break
        beta = cand
        improvement = ll_new - ll
        ll = ll_new
        trace.append(ll)
        step_size = t * float(np.max(np.abs(step)))
        if step_size < 1e-10 or (improvement < tol and step_size < 1e-8):
            converged = True
            break
    p = expit(Z @ beta)
    separated = np.min(np.minimum(p, 1 - p)) < 1e-12
    if separated or not converged:
        converged = False
        warnings.warn(
            "logistic regression did not converge (possible separation); "
            "returning last iterate", ConvergenceWarning, stacklevel=2)
    b = np.zeros(ds.r)
    b[active] = beta[1:]
    b0, coef = _unstandardize(beta[0], b, st)
    return LogisticModel(b0, coef, "none", 0.0, 1.0, converged, it, tuple(trace))


def _penalty_weights(penalty: str, lam: float, alpha: float):
    if penalty == "lasso":
        return lam, 0.0
    if penalty == "elastic-net":
        return lam * alpha, lam * (1 - alpha)
    if penalty == "ridge":
        return 0.0, 2.0 * lam
    raise ValueError(f"unknown penalty {penalty!r}")


def _penalty_value(penalty: str, alpha: float, b: np.ndarray) -> float:
    if penalty == "lasso":
        return float(np.sum(np.abs(b)))
    if penalty == "elastic-net":
        return float(np.sum((1 - alpha) / 2 * b * b + alpha * np.abs(b)))
    return float(np.sum(b * b))


def _normalize_penalty(penalty: str, lam: float, alpha: float):
    penalty = _ALIASES.get(penalty, penalty)
    if penalty not in PENALTIES[1:]:
        raise ValueError(f"penalty must be one of lasso, elastic-net, ridge; got {penalty!r}")
    if not lam >= 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if penalty == "lasso":
        alpha = 1.0
    elif penalty == "ridge":
        alpha = 0.0
    return penalty, float(lam), float(alpha)


def _fit_standardized(xs, y, penalty, lam, alpha, b0, b, max_iter, tol):
    """Proximal-Newton outer loop with step halving; ``b`` is updated in place."""
    l1, l2 = _penalty_weights(penalty, lam, alpha)

    def objective(b0_, b_):
        return log_likelihood(b0_, b_, xs, y) - lam * _penalty_value(penalty, alpha, b_)

    obj = objective(b0, b)
    trace = [obj]
    converged = False
    it = 0
    sweeps = INNER_SWEEPS
    for it in range(1, max_iter + 1):
        eta = b0 + xs @ b
        p = expit(eta)
        w = np.maximum(p * (1 - p), WEIGHT_FLOOR)
        z = eta + (y - p) / w
        cand = b.copy()
        cand0, used = cd_wls(xs, w, z, cand, b0, l1, l2, tol * 1e-2, sweeps)
        if used == sweeps:
            sweeps = min(2 * sweeps, MAX_INNER_SWEEPS)
        d0, d = cand0 - b0, cand - b
        t = 1.0
        for _ in range(40):
            obj_new = objective(b0 + t * d0, b + t * d)
            if obj_new >= obj:
                break
            t *= 0.5
        else:
            converged = True
            break
        change = t * max(abs(d0), float(np.max(np.abs(d), initial=0.0)))
        b0 = b0 + t * d0
        b[:] = b + t * d
        obj = obj_new
        trace.append(obj)
        # the objective can stop resolving progress long before the slopes settle,
        # so convergence is judged on the step alone
        if change < tol:
            converged = True
            break
    return b0, converged, it, tuple(trace)


def fit_penalized_logistic(ds: Dataset, penalty: str, lam: float, alpha: float = 0.5,
                           max_iter: int = 1000, tol: float = 1e-9) -> LogisticModel:
    """Maximize ``loglik - lam * P(b)`` over standardized slopes b.

    ``alpha`` is only used by the elastic net.  ``lam = 0`` gives the
    unpenalized maximum-likelihood fit.
    """
    penalty, lam, alpha = _normalize_penalty(penalty, lam, alpha)
    xs, y, st = _prepare(ds, "penalized logistic regression")
    ybar = y.mean()
    b = np.zeros(ds.r)
    b0, converged, it, trace = _fit_standardized(
        xs, y, penalty, lam, alpha, float(np.log(ybar / (1 - ybar))), b, max_iter, tol)
    c0, coef = _unstandardize(b0, b, st)
    return LogisticModel(c0, coef, penalty, lam, alpha, converged, it, trace)


def lambda_max(ds: Dataset, penalty: str, alpha: float = 0.5) -> float:
    """Smallest lambda at which every standardized slope is zero.

    Ridge never zeroes slopes; it uses the elastic-net value at
    alpha = 0.001 (converted to the ridge scale) as the top of its path.
    """
    penalty, _, alpha = _normalize_penalty(penalty, 0.0, alpha)
    xs, y, _ = _prepare(ds, "penalized logistic regression")
    g = float(np.max(np.abs(xs.T @ (y - y.mean()))))
    if penalty == "lasso":
        return g
    if penalty == "elastic-net":
        return g / max(alpha, 1e-3)
    return g / 1e-3 / 2.0


def lambda_grid(ds: Dataset, penalty: str, alpha: float = 0.5, n: int = 50,
                ratio: float = 1e-4) -> np.ndarray:
    """``n`` values log-spaced from ``lambda_max`` down to ``lambda_max * ratio``."""
    top = lambda_max(ds, penalty, alpha)
    if top <= 0:
        return np.zeros(1)
    return np.geomspace(top, top * ratio, n)


def penalized_logistic_path(ds: Dataset, penalty: str, lambdas, alpha: float = 0.5,
                            max_iter: int = 100, tol: float = 1e-7) -> list:
    """Fit a decreasing sequence of lambdas with warm starts; one model per lambda."""
    penalty, _, alpha = _normalize_penalty(penalty, 0.0, alpha)
    lambdas = [float(l) for l in lambdas]
    for l in lambdas:
        _normalize_penalty(penalty, l, alpha)
    xs, y, st = _prepare(ds, "penalized logistic regression")
    ybar = y.mean()
    b0 = float(np.log(ybar / (1 - ybar)))
    b = np.zeros(ds.r)
    out = [None] * len(lambdas)
    for i in np.argsort(lambdas)[::-1]:
        b0, conv, it, trace = _fit_standardized(
            xs, y, penalty, lambdas[i], alpha, b0, b, max_iter, tol)
        c0, coef = _unstandardize(b0, b, st)
        out[i] = LogisticModel(c0, coef, penalty, lambdas[i], alpha, conv, it, trace)
    return out
