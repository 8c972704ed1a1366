"""k-nearest-neighbour vote proportions on standardized features."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import Dataset, Standardizer, as_matrix, fit_standardizer

FORMAT_VERSION = 1


@dataclass(frozen=True)
class KnnModel:
    features: np.ndarray  # standardized training features
    labels: np.ndarray
    k: int
    standardizer: Standardizer

    def score(self, x) -> np.ndarray:
        """Fraction of cases among the k nearest training points (all ties at the k-th distance included)."""
        return knn_scores(self, x, [self.k])[0]

    decision_function = score

    def to_dict(self) -> dict:
        return {
            "format": "qbplab.KnnModel",
            "version": FORMAT_VERSION,
            "k": self.k,
            "features": self.features.tolist(),
            "labels": self.labels.tolist(),
            "mean": self.standardizer.mean.tolist(),
            "sd": self.standardizer.sd.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KnnModel":
        if d.get("format") != "qbplab.KnnModel" or d.get("version") != FORMAT_VERSION:
            raise ValueError("not a serialized KnnModel (version 1)")
        st = Standardizer(np.array(d["mean"]), np.array(d["sd"]))
        return cls(np.array(d["features"]), np.array(d["labels"]), int(d["k"]), st)


def fit_knn(ds: Dataset, k: int) -> KnnModel:
    ds.require_complete("kNN")
    if not 1 <= k <= ds.n:
        raise ValueError(f"k must be in [1, {ds.n}], got {k}")
    st = fit_standardizer(ds.features)
    return KnnModel(st.transform(ds.features), ds.labels.copy(), int(k), st)


def knn_scores(model: KnnModel, x, ks) -> list:
    """Vote proportions for several neighbour counts from one distance computation."""
    q = model.standardizer.transform(as_matrix(x))
    if np.isnan(q).any():
        raise ValueError("kNN queries must not contain missing values")
    n_train = model.features.shape[0]
    for k in ks:
        if not 1 <= k <= n_train:
            raise ValueError(f"k={k} outside [1, {n_train}]")
    # direct differences (not the expanded quadratic form) so that equal
    # vectors give exactly equal distances and ties are detected reliably
    d2 = np.empty((q.shape[0], n_train))
    step = max(1, 2_000_000 // max(1, n_train * q.shape[1]))
    for i in range(0, q.shape[0], step):
        diff = q[i:i + step, None, :] - model.features[None, :, :]
        d2[i:i + step] = np.einsum("ijk,ijk->ij", diff, diff)
    order = np.argsort(d2, axis=1, kind="stable")
    sd = np.take_along_axis(d2, order, axis=1)
    cum_cases = np.cumsum(model.labels[order], axis=1)
    rows = np.arange(q.shape[0])
    out = []
    for k in ks:
        kth = sd[:, k - 1]
        # number of training points at distance <= the k-th distance
        m = np.sum(sd <= kth[:, None], axis=1)
        out.append(cum_cases[rows, m - 1] / m)
    return out


def knn_score(model: KnnModel, x) -> np.ndarray:
    return model.score(x)
