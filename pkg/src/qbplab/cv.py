"""Parameter tuning by stratified k-fold CV, the independent-validation
simulation benchmark, and repeated double cross-validation (rdCV).

Every repetition draws from its own stream, derived from
``(master_seed, repetition)``, so results do not depend on how many
repetitions run, in which order, or on how many worker processes are used.
Within a repetition all methods see the same data and the same folds.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .baselines import ConvergenceWarning
from .data import Dataset, DataError, stratified_folds
from .methods import Method, get_method, params_to_json
from .metrics import auc, selection_performance
from .qbp import TailOverlapWarning
from .simgen import SimDesign, build_design, sample_dataset


@dataclass(frozen=True)
class ParamGrid:
    method: str
    settings: tuple

    def __post_init__(self):
        if not self.settings:
            raise ValueError(f"empty parameter grid for {self.method}")

    def __len__(self):
        return len(self.settings)


@dataclass(frozen=True)
class TuneResult:
    params: dict
    index: int
    mean_auc: np.ndarray
    grid: ParamGrid


def min_fit_size(n: int, K: int) -> int:
    """Smallest training-fold size of a K-fold split of n subjects."""
    return n - math.ceil(n / K)


def kfold_tune(ds: Dataset, method, grid=None, K: int = 6,
               rng: np.random.Generator | None = None) -> TuneResult:
    """Pick the setting with the highest mean held-out AUC over K stratified folds.

    Ties go to the earliest setting in grid order.
    """
    method = get_method(method)
    method.check(ds)
    rng = rng if rng is not None else np.random.default_rng(0)
    folds = stratified_folds(ds, K, rng)
    if grid is None:
        grid = method.param_grid(ds, min_fit_size(ds.n, K))
    if not isinstance(grid, ParamGrid):
        grid = ParamGrid(method.name, tuple(grid))
    settings = list(grid.settings)
    aucs = np.empty((K, len(settings)))
    for f, (tr, te) in enumerate(folds.splits()):
        train, test = ds.subset(tr), ds.subset(te)
        if test.n_cases == 0 or test.n_controls == 0:
            raise DataError(f"fold {f} holds a single class; AUC undefined")
        for j, s in enumerate(method.fold_scores(train, test.features, settings)):
            aucs[f, j] = auc(s, test.labels)
    mean = aucs.mean(axis=0)
    best = int(np.argmax(mean))
    return TuneResult(settings[best], best, mean, grid)


# ---------------------------------------------------------------- results

_COLUMNS = ("protocol", "dataset", "method", "rep", "params", "auc", "n_selected",
            "sensitivity", "specificity", "accuracy")


@dataclass(frozen=True)
class BenchmarkRow:
    protocol: str
    dataset: str
    method: str
    rep: int
    params: str
    auc: float
    n_selected: float
    sensitivity: float = math.nan
    specificity: float = math.nan
    accuracy: float = math.nan

    def as_strings(self) -> list:
        def fmt(v):
            if isinstance(v, float):
                return "" if math.isnan(v) else repr(v)
            return str(v)
        return [fmt(getattr(self, c)) for c in _COLUMNS]


@dataclass
class BenchmarkResult:
    rows: list = field(default_factory=list)

    def add(self, rows: Iterable[BenchmarkRow]):
        self.rows.extend(rows)
        self.rows.sort(key=lambda r: (r.method, r.rep))

    def methods(self) -> list:
        seen = []
        for r in self.rows:
            if r.method not in seen:
                seen.append(r.method)
        return seen

    def for_method(self, method: str) -> list:
        return [r for r in self.rows if r.method == method]

    def aucs(self, method: str) -> np.ndarray:
        return np.array([r.auc for r in self.for_method(method)])

    def mean(self, method: str, column: str = "auc") -> float:
        vals = np.array([getattr(r, column) for r in self.for_method(method)], dtype=float)
        vals = vals[~np.isnan(vals)]
        return float(vals.mean()) if vals.size else math.nan

    def summary(self) -> list:
        """(method, reps, mean AUC, sd AUC) per method."""
        out = []
        for m in self.methods():
            a = self.aucs(m)
            sd = float(a.std(ddof=1)) if a.size > 1 else math.nan
            out.append((m, int(a.size), float(a.mean()), sd))
        return out

    def to_csv(self, path):
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(_COLUMNS)
            for r in self.rows:
                w.writerow(r.as_strings())

    def summary_to_csv(self, path):
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["method", "reps", "mean_auc", "sd_auc", "mean_n_selected",
                        "mean_sensitivity", "mean_specificity", "mean_accuracy"])
            for m, n, mean, sd in self.summary():
                extra = [self.mean(m, c) for c in
                         ("n_selected", "sensitivity", "specificity", "accuracy")]
                w.writerow([m, n, *("" if math.isnan(v) else repr(v) for v in (mean, sd, *extra))])

    @classmethod
    def from_csv(cls, path) -> "BenchmarkResult":
        def num(s):
            return math.nan if s == "" else float(s)
        rows = []
        with Path(path).open(newline="", encoding="utf-8") as fh:
            for d in csv.DictReader(fh):
                rows.append(BenchmarkRow(d["protocol"], d["dataset"], d["method"], int(d["rep"]),
                                         d["params"], num(d["auc"]), num(d["n_selected"]),
                                         num(d["sensitivity"]), num(d["specificity"]),
                                         num(d["accuracy"])))
        res = cls()
        res.add(rows)
        return res


# ---------------------------------------------------------------- protocols


def _rep_indices(reps) -> list:
    if isinstance(reps, (int, np.integer)):
        if reps < 1:
            raise ValueError("reps must be >= 1")
        return list(range(int(reps)))
    idx = sorted(int(r) for r in reps)
    if not idx or idx[0] < 0:
        raise ValueError("repetition indices must be nonnegative and nonempty")
    return idx


def _run_parallel(fn, args: list, threads: int) -> list:
    if threads is None or threads <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    from joblib import Parallel, delayed
    return Parallel(n_jobs=threads)(delayed(fn)(*a) for a in args)


def _quiet():
    ctx = warnings.catch_warnings()
    ctx.__enter__()
    warnings.simplefilter("ignore", ConvergenceWarning)
    warnings.simplefilter("ignore", TailOverlapWarning)
    warnings.simplefilter("ignore", RuntimeWarning)
    return ctx


def _single_thread_blas():
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=1)


def _selection_fields(method: Method, model, relevant, r: int):
    """(n_selected, sensitivity, specificity, accuracy); non-selecting methods use all r."""
    sel = method.selected(model)
    if sel is None:
        return float(r), math.nan, math.nan, math.nan
    rep = selection_performance(sel, relevant)
    return float(np.sum(sel)), rep.sensitivity, rep.specificity, rep.accuracy


def _simulate_rep(design: SimDesign, method_names: Sequence[str], seed: int, rep: int,
                  validation_n: int, K: int) -> list:
    ctx = _quiet()
    try:
        with _single_thread_blas():
            ss_train, ss_valid, ss_folds = np.random.SeedSequence([seed, rep]).spawn(3)
            train, relevant = sample_dataset(design, np.random.default_rng(ss_train))
            valid, _ = sample_dataset(design, np.random.default_rng(ss_valid), n=validation_n)
            rows = []
            for name in method_names:
                method = get_method(name)
                tuned = kfold_tune(train, method, None, K, np.random.default_rng(ss_folds))
                model = method.fit(train, tuned.params)
                val_auc = auc(method.rank_scores(model, valid.features), valid.labels)
                n_sel, sens, spec, acc = _selection_fields(method, model, relevant, train.r)
                rows.append(BenchmarkRow("simulation", design.id, method.name, rep,
                                         params_to_json(tuned.params), val_auc, n_sel,
                                         sens, spec, acc))
            return rows
    finally:
        ctx.__exit__(None, None, None)


def simulate_benchmark(design, methods: Sequence[str], reps=500, seed: int = 0,
                       validation_n: int = 5000, K: int = 6, threads: int = 1,
                       correlation="identity", n: int | None = None) -> BenchmarkResult:
    """Independent-validation protocol: per repetition draw a training set of the
    design size and a validation set of ``validation_n`` subjects (same case
    proportion), tune by K-fold CV on the training set, refit, and record the
    validation AUC and biomarker-selection metrics.

    ``reps`` is a count or an explicit collection of repetition indices.
    """
    if not isinstance(design, SimDesign):
        design = build_design(design, correlation)
    if n is not None:
        design = design.with_n(n)
    names = [get_method(m).name for m in methods]
    if not names:
        raise ValueError("no methods requested")
    args = [(design, names, seed, rep, validation_n, K) for rep in _rep_indices(reps)]
    result = BenchmarkResult()
    for rows in _run_parallel(_simulate_rep, args, threads):
        result.add(rows)
    return result


def _rdcv_rep(ds: Dataset, dataset_name: str, method_names, grids, seed, rep,
              K_outer, K_inner) -> list:
    ctx = _quiet()
    try:
        with _single_thread_blas():
            children = np.random.SeedSequence([seed, rep]).spawn(1 + K_outer)
            outer = stratified_folds(ds, K_outer, np.random.default_rng(children[0]))
            rows = []
            for name in method_names:
                method = get_method(name)
                fold_aucs, chosen, n_sel = [], [], []
                for f, (tr, te) in enumerate(outer.splits()):
                    train, test = ds.subset(tr), ds.subset(te)
                    grid = grids.get(method.name) if grids else None
                    tuned = kfold_tune(train, method, grid, K_inner,
                                       np.random.default_rng(children[1 + f]))
                    model = method.fit(train, tuned.params)
                    fold_aucs.append(auc(method.rank_scores(model, test.features), test.labels))
                    chosen.append(tuned.params)
                    sel = method.selected(model)
                    n_sel.append(float(np.sum(sel)) if sel is not None else float(ds.r))
                rows.append(BenchmarkRow("rdcv", dataset_name, method.name, rep,
                                         params_to_json(chosen), float(np.mean(fold_aucs)),
                                         float(np.mean(n_sel))))
            return rows
    finally:
        ctx.__exit__(None, None, None)


def rdcv(ds: Dataset, methods: Sequence[str], grids: dict | None = None, reps=500,
         K_outer: int = 6, K_inner: int = 6, seed: int = 0, threads: int = 1,
         dataset_name: str = "data") -> BenchmarkResult:
    """Repeated double cross-validation.

    Each repetition makes a fresh stratified outer split; every outer
    training part is tuned by an inner K-fold CV, refitted, and scored on
    its held-out part.  The repetition AUC is the mean of the outer-fold AUCs.
    """
    names = [get_method(m).name for m in methods]
    if not names:
        raise ValueError("no methods requested")
    for m in names:
        get_method(m).check(ds)
    ds.require_both_classes()
    # the smallest inner training class must still fill every inner fold
    for cls, count in ((0, ds.n_controls), (1, ds.n_cases)):
        smallest_outer_train = count - math.ceil(count / K_outer)
        if count < K_outer or smallest_outer_train < K_inner:
            raise DataError(
                f"class {cls} has {count} subjects: after removing one of {K_outer} outer folds "
                f"only {smallest_outer_train} remain, fewer than the {K_inner} inner folds need"
            )
    args = [(ds, dataset_name, names, grids, seed, rep, K_outer, K_inner)
            for rep in _rep_indices(reps)]
    result = BenchmarkResult()
    for rows in _run_parallel(_rdcv_rep, args, threads):
        result.add(rows)
    return result
