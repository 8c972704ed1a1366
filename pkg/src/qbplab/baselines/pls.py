"""SIMPLS for a single binary response and PLS-LDA on its latent variables."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import Dataset, as_matrix, fit_standardizer
from .lda import LdaModel, fit_lda

FORMAT_VERSION = 1
_RANK_TOL = 1e-10


@dataclass(frozen=True)
class PlsBasis:
    directions: np.ndarray  # r x s, unit columns in scaled coordinates
    mean: np.ndarray
    rank_limited: bool = False
    scale: np.ndarray | None = None  # per-column divisor; None means centering only

    @property
    def n_components(self) -> int:
        return self.directions.shape[1]

    def transform(self, x, s: int | None = None) -> np.ndarray:
        a = self.directions if s is None else self.directions[:, :s]
        x = as_matrix(x) - self.mean
        if self.scale is not None:
            x = x / self.scale
        return x @ a


def simpls(ds: Dataset, s: int, scale: bool = True) -> PlsBasis:
    """Extract up to ``s`` unit directions whose scores have maximal covariance
    with the centered label, each uncorrelated with the earlier scores.

    Features are centered, and with ``scale=True`` also divided by their
    sample sd (constant columns are left unscaled), so that a biomarker's
    measurement unit does not decide its weight in the first components.
    Stops early, with ``rank_limited=True``, when the deflated
    cross-covariance vanishes.
    """
    ds.require_complete("PLS")
    if not 1 <= s <= min(ds.r, ds.n - 1):
        raise ValueError(f"component count must be in [1, {min(ds.r, ds.n - 1)}], got {s}")
    mean = ds.features.mean(axis=0)
    x = ds.features - mean
    divisor = None
    if scale:
        sd = fit_standardizer(ds.features).sd
        divisor = np.where(sd > 0, sd, 1.0)
        x = x / divisor
    y = ds.labels - ds.labels.mean()
    cross = x.T @ y
    start = float(np.linalg.norm(cross))
    loadings = np.zeros((ds.r, 0))  # orthonormal basis of the x-loadings so far
    dirs = []
    limited = False
    for _ in range(s):
        norm = float(np.linalg.norm(cross))
        if start == 0 or norm <= _RANK_TOL * start:
            limited = True
            break
        a = cross / norm
        t = x @ a
        tt = float(t @ t)
        if tt <= _RANK_TOL * max(start, 1.0):
            limited = True
            break
        p = x.T @ t / tt
        v = p - loadings @ (loadings.T @ p)
        # re-orthogonalize once for numerical safety
        v = v - loadings @ (loadings.T @ v)
        vn = float(np.linalg.norm(v))
        if vn == 0:
            limited = True
            break
        v /= vn
        loadings = np.column_stack([loadings, v])
        cross = cross - v * float(v @ cross)
        dirs.append(a)
    directions = np.column_stack(dirs) if dirs else np.zeros((ds.r, 0))
    return PlsBasis(directions, mean, limited, divisor)


@dataclass(frozen=True)
class PlsLdaModel:
    basis: PlsBasis
    n_components: int
    lda: LdaModel

    def decision_function(self, x) -> np.ndarray:
        return self.lda.decision_function(self.basis.transform(x, self.n_components))

    score = decision_function

    def to_dict(self) -> dict:
        return {
            "format": "qbplab.PlsLdaModel",
            "version": FORMAT_VERSION,
            "directions": self.basis.directions.tolist(),
            "mean": self.basis.mean.tolist(),
            "scale": None if self.basis.scale is None else self.basis.scale.tolist(),
            "n_components": self.n_components,
            "lda": self.lda.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlsLdaModel":
        if d.get("format") != "qbplab.PlsLdaModel" or d.get("version") != FORMAT_VERSION:
            raise ValueError("not a serialized PlsLdaModel (version 1)")
        scale = d.get("scale")
        basis = PlsBasis(np.array(d["directions"]).reshape(len(d["mean"]), -1), np.array(d["mean"]),
                         scale=None if scale is None else np.array(scale))
        return cls(basis, int(d["n_components"]), LdaModel.from_dict(d["lda"]))


def fit_pls_lda(ds: Dataset, s: int, basis: PlsBasis | None = None) -> PlsLdaModel:
    """LDA (empirical priors) on the first ``s`` SIMPLS latent variables.

    When the basis is rank limited, fewer than ``s`` components are used.
    """
    basis = basis or simpls(ds, s)
    s_used = min(s, basis.n_components)
    if s_used < 1:
        raise ValueError("PLS produced no components (label uncorrelated with every feature)")
    z = basis.transform(ds.features, s_used)
    names = tuple(f"pls{l + 1}" for l in range(s_used))
    return PlsLdaModel(basis, s_used, fit_lda(Dataset(z, ds.labels, names)))
