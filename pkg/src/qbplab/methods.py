"""Uniform fit / tune / score adapters for QBP and the baselines.

A method turns a training Dataset plus one parameter setting into a fitted
model, and ranks new subjects with a continuous score (higher = more
case-like).  ``fold_scores`` evaluates a whole parameter grid on one split;
methods override it when the grid can share work (a lambda path, a single
PCA or SIMPLS basis, one distance matrix for every k).
"""
from __future__ import annotations

import json
from typing import Optional

import numpy as np

from . import baselines as bl
from .data import Dataset
from .qbp import QbpConfig, fit_qbp, fit_qbp_grid

QBP_RATIO_BOUNDS = ((1.5, 2, 3), (1.5, 2, 5), (1.5, 2.5, 5), (1.4, 2.5, 8), (2, 3, 6), (2, 3, 10))
QBP_MAX_SCORES = ((1, 2, 3), (1, 4, 9))
KNN_CANDIDATES = tuple(range(1, 21)) + (25, 30, 40, 50, 75, 100, 150)
DEFAULT_EN_ALPHA = 0.5


class Method:
    name: str = ""
    selects: bool = False  # performs biomarker selection
    accepts_missing: bool = False

    def param_grid(self, ds: Dataset, n_fit: int) -> list:
        return [{}]

    def default_params(self, ds: Dataset) -> dict:
        return self.param_grid(ds, ds.n)[0]

    def fit(self, ds: Dataset, params: dict):
        raise NotImplementedError

    def rank_scores(self, model, x) -> np.ndarray:
        return model.decision_function(x)

    def fold_scores(self, train: Dataset, x_test, grid: list) -> list:
        return [self.rank_scores(self.fit(train, p), x_test) for p in grid]

    def selected(self, model) -> Optional[np.ndarray]:
        return None

    def check(self, ds: Dataset):
        if not self.accepts_missing:
            ds.require_complete(self.name)

    def __repr__(self):
        return f"<method {self.name}>"


class QbpMethod(Method):
    name = "qbp"
    selects = True
    accepts_missing = True

    def param_grid(self, ds, n_fit):
        return [{"ratio_bounds": list(b), "max_scores": list(v)}
                for b in QBP_RATIO_BOUNDS for v in QBP_MAX_SCORES]

    def default_params(self, ds):
        return {"ratio_bounds": [2, 3, 5], "max_scores": [1, 2, 3]}

    @staticmethod
    def _config(p):
        return QbpConfig(ratio_bounds=tuple(p["ratio_bounds"]), max_scores=tuple(p["max_scores"]))

    def fit(self, ds, params):
        return fit_qbp(ds, self._config(params))

    def rank_scores(self, model, x):
        return model.score(x)

    def fold_scores(self, train, x_test, grid):
        models = fit_qbp_grid(train, [self._config(p) for p in grid])
        return [m.score(x_test) for m in models]

    def selected(self, model):
        return model.selected()


class LogisticMethod(Method):
    name = "lr"

    def fit(self, ds, params):
        return bl.fit_logistic(ds)


class PenalizedLogisticMethod(Method):
    def __init__(self, penalty: str, alpha: float = DEFAULT_EN_ALPHA):
        self.penalty = penalty
        self.alpha = alpha if penalty == "elastic-net" else (1.0 if penalty == "lasso" else 0.0)
        self.name = {"lasso": "plr-lasso", "elastic-net": "plr-en", "ridge": "plr-ridge"}[penalty]
        self.selects = penalty != "ridge"

    def param_grid(self, ds, n_fit):
        return [{"lam": float(l)} for l in bl.lambda_grid(ds, self.penalty, self.alpha)]

    def default_params(self, ds):
        grid = self.param_grid(ds, ds.n)
        return grid[len(grid) // 2]

    def fit(self, ds, params):
        return bl.fit_penalized_logistic(ds, self.penalty, params["lam"], self.alpha)

    def fold_scores(self, train, x_test, grid):
        path = bl.penalized_logistic_path(train, self.penalty, [p["lam"] for p in grid], self.alpha)
        return [m.decision_function(x_test) for m in path]

    def selected(self, model):
        # ridge keeps every coefficient, so it makes no selection
        return model.selected() if self.selects else None


class PclrMethod(Method):
    name = "pclr"

    def param_grid(self, ds, n_fit):
        top = max(1, min(ds.r, n_fit - 2))
        return [{"n_components": s} for s in range(1, top + 1)]

    def fit(self, ds, params):
        return bl.fit_pclr(ds, int(params["n_components"]))

    def fold_scores(self, train, x_test, grid):
        basis = bl.pca(train)
        return [self.rank_scores(bl.fit_pclr(train, int(p["n_components"]), basis), x_test)
                for p in grid]


class LdaMethod(Method):
    name = "lda"

    def fit(self, ds, params):
        return bl.fit_lda(ds)


class PlsLdaMethod(Method):
    name = "pls-lda"

    def param_grid(self, ds, n_fit):
        top = max(1, min(ds.r, n_fit - 2))
        return [{"n_components": s} for s in range(1, top + 1)]

    def fit(self, ds, params):
        s = min(int(params["n_components"]), ds.r, ds.n - 1)
        return bl.fit_pls_lda(ds, s)

    def fold_scores(self, train, x_test, grid):
        s_max = min(max(int(p["n_components"]) for p in grid), train.r, train.n - 1)
        basis = bl.simpls(train, s_max)
        return [self.rank_scores(bl.fit_pls_lda(train, int(p["n_components"]), basis), x_test)
                for p in grid]


class KnnMethod(Method):
    name = "knn"

    def param_grid(self, ds, n_fit):
        return [{"k": k} for k in KNN_CANDIDATES if k <= n_fit]

    def default_params(self, ds):
        return {"k": min(10, ds.n)}

    def fit(self, ds, params):
        return bl.fit_knn(ds, int(params["k"]))

    def rank_scores(self, model, x):
        return model.score(x)

    def fold_scores(self, train, x_test, grid):
        model = bl.fit_knn(train, 1)
        return bl.knn_scores(model, x_test, [int(p["k"]) for p in grid])


_FACTORIES = {
    "qbp": QbpMethod,
    "lr": LogisticMethod,
    "plr-lasso": lambda: PenalizedLogisticMethod("lasso"),
    "plr-en": lambda: PenalizedLogisticMethod("elastic-net"),
    "plr-ridge": lambda: PenalizedLogisticMethod("ridge"),
    "pclr": PclrMethod,
    "lda": LdaMethod,
    "pls-lda": PlsLdaMethod,
    "knn": KnnMethod,
}
METHOD_NAMES = tuple(_FACTORIES)


def get_method(name) -> Method:
    if isinstance(name, Method):
        return name
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise ValueError(
            f"unknown method {name!r}; valid names: {', '.join(METHOD_NAMES)}") from None


def params_to_json(params) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"))
