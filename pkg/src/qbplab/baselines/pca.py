"""Principal component analysis and principal component logistic regression."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import Dataset, as_matrix
from .logistic import LogisticModel, fit_logistic

FORMAT_VERSION = 1


@dataclass(frozen=True)
class PcaBasis:
    """Eigenvectors (columns, nonincreasing eigenvalue order) of the sample covariance."""

    eigenvectors: np.ndarray
    eigenvalues: np.ndarray
    mean: np.ndarray

    def transform(self, x, s: int | None = None) -> np.ndarray:
        v = self.eigenvectors if s is None else self.eigenvectors[:, :s]
        return (as_matrix(x) - self.mean) @ v

    def reconstruct(self, scores: np.ndarray) -> np.ndarray:
        """Centered data rebuilt from the leading ``scores.shape[1]`` components."""
        s = scores.shape[1]
        return scores @ self.eigenvectors[:, :s].T

    def explained_variance_pct(self, s: int) -> float:
        total = float(np.sum(self.eigenvalues))
        return 100.0 * float(np.sum(self.eigenvalues[:s])) / total if total > 0 else 100.0


def pca(ds: Dataset) -> PcaBasis:
    ds.require_complete("PCA")
    x = ds.features
    mean = x.mean(axis=0)
    xc = x - mean
    cov = xc.T @ xc / (ds.n - 1)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals, kind="stable")[::-1]
    vals = np.clip(vals[order], 0.0, None)
    vecs = vecs[:, order]
    # deterministic sign: largest-magnitude loading of each component positive
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return PcaBasis(vecs * signs, vals, mean)


@dataclass(frozen=True)
class PclrModel:
    basis: PcaBasis
    n_components: int
    logit: LogisticModel

    def decision_function(self, x) -> np.ndarray:
        return self.logit.decision_function(self.basis.transform(x, self.n_components))

    def score(self, x) -> np.ndarray:
        return self.logit.predict_proba(self.basis.transform(x, self.n_components))

    def to_dict(self) -> dict:
        return {
            "format": "qbplab.PclrModel",
            "version": FORMAT_VERSION,
            "eigenvectors": self.basis.eigenvectors.tolist(),
            "eigenvalues": self.basis.eigenvalues.tolist(),
            "mean": self.basis.mean.tolist(),
            "n_components": self.n_components,
            "logit": self.logit.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PclrModel":
        if d.get("format") != "qbplab.PclrModel" or d.get("version") != FORMAT_VERSION:
            raise ValueError("not a serialized PclrModel (version 1)")
        basis = PcaBasis(np.array(d["eigenvectors"]), np.array(d["eigenvalues"]), np.array(d["mean"]))
        return cls(basis, int(d["n_components"]), LogisticModel.from_dict(d["logit"]))


def fit_pclr(ds: Dataset, s: int, basis: PcaBasis | None = None) -> PclrModel:
    """Logistic regression on the first ``s`` principal components."""
    if not 1 <= s <= ds.r:
        raise ValueError(f"component count must be in [1, {ds.r}], got {s}")
    basis = basis or pca(ds)
    z = basis.transform(ds.features, s)
    names = tuple(f"pc{l + 1}" for l in range(s))
    return PclrModel(basis, s, fit_logistic(Dataset(z, ds.labels, names)))
