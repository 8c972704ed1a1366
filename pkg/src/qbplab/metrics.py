"""ROC curves, AUC, and biomarker-selection performance."""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np


def _check(scores, labels):
    s = np.asarray(scores, dtype=float).ravel()
    y = np.asarray(labels).ravel()
    if s.shape != y.shape:
        raise ValueError(f"{s.size} scores but {y.size} labels")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    if np.isnan(s).any():
        raise ValueError("scores contain NaN")
    y = y.astype(bool)
    if y.all() or not y.any():
        raise ValueError("ROC analysis needs at least one case and one control")
    return s, y


@dataclass(frozen=True)
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray
    auc: float

    @property
    def points(self) -> list:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))

    def to_csv(self, path, comment: str | None = None):
        path = Path(path)
        with path.open("w", newline="", encoding="utf-8") as fh:
            if comment:
                fh.write(f"# {comment}\n")
            fh.write(f"# auc={self.auc!r}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["fpr", "tpr"])
            for f, t in zip(self.fpr, self.tpr):
                w.writerow([repr(float(f)), repr(float(t))])


def roc_curve(scores, labels) -> RocCurve:
    """ROC over the distinct score values, predicting a case when score >= threshold.

    The curve starts at (0, 0) (threshold +inf) and steps through each
    distinct score in decreasing order, so tied scores move diagonally and
    the trapezoidal area equals the tie-corrected rank statistic.
    """
    s, y = _check(scores, labels)
    order = np.argsort(-s, kind="mergesort")
    s, y = s[order], y[order]
    last = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tp = np.cumsum(y)[last]
    fp = (last + 1) - tp
    n_pos, n_neg = int(y.sum()), int((~y).sum())
    tpr = np.r_[0.0, tp / n_pos]
    fpr = np.r_[0.0, fp / n_neg]
    # integrate in counts to keep the result exact for small inputs
    tpc = np.r_[0, tp].astype(float)
    fpc = np.r_[0, fp].astype(float)
    area = np.sum(np.diff(fpc) * (tpc[1:] + tpc[:-1])) / 2.0
    auc = float(area / (n_pos * n_neg))
    return RocCurve(fpr, tpr, np.r_[np.inf, s[last]], auc)


def auc_rank(scores, labels) -> float:
    """Wilcoxon-Mann-Whitney estimate by brute-force pair counting (ties count 1/2)."""
    s, y = _check(scores, labels)
    cases, controls = s[y], s[~y]
    wins = 0.0
    for start in range(0, cases.size, 2048):
        c = cases[start:start + 2048, None]
        wins += np.sum(c > controls[None, :]) + 0.5 * np.sum(c == controls[None, :])
    return float(wins / (cases.size * controls.size))


def auc(scores, labels) -> float:
    return roc_curve(scores, labels).auc


def confusion_at_threshold(scores, labels, t: float) -> tuple[float, float]:
    """(sensitivity, specificity) when subjects with score >= t are called cases."""
    s, y = _check(scores, labels)
    pred = s >= t
    tp = np.sum(pred & y)
    tn = np.sum(~pred & ~y)
    return float(tp / y.sum()), float(tn / (~y).sum())


@dataclass(frozen=True)
class SelectionReport:
    sensitivity: float
    specificity: float
    accuracy: float
    tp: int
    tn: int
    fp: int
    fn: int


def selection_performance(selected, relevant) -> SelectionReport:
    """Compare a selected-biomarker mask to the ground-truth relevance mask.

    Sensitivity (specificity) is ``nan`` with a warning when no biomarker is
    relevant (irrelevant).
    """
    sel = np.asarray(selected).astype(bool).ravel()
    rel = np.asarray(relevant).astype(bool).ravel()
    if sel.shape != rel.shape:
        raise ValueError(f"mask lengths differ: {sel.size} vs {rel.size}")
    tp = int(np.sum(sel & rel))
    tn = int(np.sum(~sel & ~rel))
    fp = int(np.sum(sel & ~rel))
    fn = int(np.sum(~sel & rel))
    if tp + fn == 0:
        warnings.warn("no relevant biomarkers: sensitivity undefined", RuntimeWarning, stacklevel=2)
        sens = math.nan
    else:
        sens = tp / (tp + fn)
    if tn + fp == 0:
        warnings.warn("no irrelevant biomarkers: specificity undefined", RuntimeWarning, stacklevel=2)
        spec = math.nan
    else:
        spec = tn / (tn + fp)
    return SelectionReport(sens, spec, (tp + tn) / sel.size, tp, tn, fp, fn)
