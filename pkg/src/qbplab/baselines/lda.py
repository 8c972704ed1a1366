"""Two-class linear discriminant analysis with a pooled covariance."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..data import Dataset, DataError, as_matrix

FORMAT_VERSION = 1
DEFAULT_RIDGE = 1e-6


@dataclass(frozen=True)
class LdaModel:
    mean0: np.ndarray
    mean1: np.ndarray
    covariance: np.ndarray
    ridge: float
    log_prior_ratio: float
    direction: np.ndarray
    offset: float

    def decision_function(self, x) -> np.ndarray:
        """Log posterior odds of being a case (linear in x)."""
        return self.offset + as_matrix(x) @ self.direction

    score = decision_function

    def to_dict(self) -> dict:
        return {
            "format": "qbplab.LdaModel",
            "version": FORMAT_VERSION,
            "mean0": self.mean0.tolist(),
            "mean1": self.mean1.tolist(),
            "covariance": self.covariance.tolist(),
            "ridge": self.ridge,
            "log_prior_ratio": self.log_prior_ratio,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LdaModel":
        if d.get("format") != "qbplab.LdaModel" or d.get("version") != FORMAT_VERSION:
            raise ValueError("not a serialized LdaModel (version 1)")
        return _build(np.array(d["mean0"]), np.array(d["mean1"]), np.array(d["covariance"]),
                      float(d["ridge"]), float(d["log_prior_ratio"]))


def _build(mu0, mu1, cov, ridge, lpr) -> LdaModel:
    r = cov.shape[0]
    try:
        factor = cho_factor(cov + ridge * np.eye(r))
    except np.linalg.LinAlgError:
        raise DataError("pooled covariance plus ridge is not positive definite") from None
    direction = cho_solve(factor, mu1 - mu0)
    offset = lpr - 0.5 * float((mu1 + mu0) @ direction)
    return LdaModel(mu0, mu1, cov, ridge, lpr, direction, offset)


def fit_lda(ds: Dataset, ridge: float | None = None) -> LdaModel:
    """Gaussian LDA with empirical priors.

    ``ridge`` is the stabilizer added to the pooled covariance diagonal;
    the default is ``1e-6 * trace(cov) / r``.  Pass 0 to demand an
    invertible covariance.
    """
    ds.require_complete("LDA")
    y = ds.labels
    n0, n1 = ds.n_controls, ds.n_cases
    if n0 < 2 or n1 < 2:
        raise DataError("LDA needs at least 2 subjects per class")
    x0, x1 = ds.features[y == 0], ds.features[y == 1]
    mu0, mu1 = x0.mean(axis=0), x1.mean(axis=0)
    c0, c1 = x0 - mu0, x1 - mu1
    cov = (c0.T @ c0 + c1.T @ c1) / (ds.n - 2)
    if ridge is None:
        ridge = DEFAULT_RIDGE * float(np.trace(cov)) / ds.r
    if ridge < 0:
        raise ValueError("ridge must be >= 0")
    return _build(mu0, mu1, cov, float(ridge), float(np.log(n1 / n0)))
