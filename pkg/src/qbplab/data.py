"""Dataset container, CSV ingestion, stratified folds and standardization.

Missing cells are stored as ``NaN``. They are accepted by the QBP fitter
(scored as 0) and rejected by every baseline fitter.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


class DataError(ValueError):
    """Raised for malformed input data, with row/column location when known."""


@dataclass(frozen=True)
class Dataset:
    """n subjects by r biomarkers plus binary labels (0 = control, 1 = case)."""

    features: np.ndarray
    labels: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        x = np.array(self.features, dtype=float, copy=True)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2:
            raise DataError("features must be a 2-d matrix")
        y = np.asarray(self.labels)
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise DataError(f"labels must have length {x.shape[0]}")
        if not np.all((y == 0) | (y == 1)):
            bad = int(np.flatnonzero((y != 0) & (y != 1))[0])
            raise DataError(f"label of row {bad} is {y[bad]!r}, expected 0 or 1")
        y = y.astype(np.int64)
        n, r = x.shape
        if n < 2 or r < 1:
            raise DataError(f"need n >= 2 and r >= 1, got n={n}, r={r}")
        if np.isinf(x).any():
            raise DataError("features contain infinite values")
        names = tuple(self.names) if self.names else tuple(f"b{k + 1}" for k in range(r))
        if len(names) != r:
            raise DataError(f"expected {r} names, got {len(names)}")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def r(self) -> int:
        return self.features.shape[1]

    @property
    def n_cases(self) -> int:
        return int(self.labels.sum())

    @property
    def n_controls(self) -> int:
        return self.n - self.n_cases

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.features)

    def has_missing(self) -> bool:
        return bool(self.missing.any())

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows)
        return Dataset(self.features[rows], self.labels[rows], self.names)

    def require_both_classes(self):
        if self.n_cases == 0 or self.n_controls == 0:
            raise DataError("dataset needs at least one case and one control")

    def require_complete(self, who: str = "this method"):
        if self.has_missing():
            i, k = np.argwhere(self.missing)[0]
            raise DataError(
                f"{who} does not accept missing values "
                f"(first at row {i}, column {self.names[k]!r})"
            )


def load_csv(path, label_column: str) -> Dataset:
    """Read a comma-separated file with a header row.

    Empty fields become missing. Every other column must parse as a float.
    Errors name the 1-based line number and the column.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        seen = set()
        for h in header:
            if h in seen:
                raise DataError(f"{path}: duplicate column name {h!r}")
            seen.add(h)
        if label_column not in header:
            raise DataError(f"{path}: label column {label_column!r} not in header")
        li = header.index(label_column)
        names = [h for j, h in enumerate(header) if j != li]
        if not names:
            raise DataError(f"{path}: no biomarker columns")
        labels, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(
                    f"{path}: line {lineno} has {len(row)} fields, expected {len(header)}"
                )
            lab = row[li].strip()
            if lab not in ("0", "1", "0.0", "1.0"):
                raise DataError(
                    f"{path}: line {lineno}, column {label_column!r}: "
                    f"label {lab!r} is not 0 or 1"
                )
            labels.append(int(float(lab)))
            values = []
            for j, cell in enumerate(row):
                if j == li:
                    continue
                cell = cell.strip()
                if cell == "":
                    values.append(math.nan)
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: line {lineno}, column {header[j]!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
                if math.isnan(v) or math.isinf(v):
                    raise DataError(
                        f"{path}: line {lineno}, column {header[j]!r}: "
                        f"non-finite value {cell!r} (leave the cell empty for missing)"
                    )
                values.append(v)
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return Dataset(np.array(rows, dtype=float), np.array(labels), tuple(names))


def write_csv(ds: Dataset, path, label_column: str = "y"):
    """Write ``ds`` with the label first. Floats use ``repr`` so reloading is exact."""
    if label_column in ds.names:
        raise DataError(f"label column name {label_column!r} clashes with a biomarker")
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([label_column, *ds.names])
        for yi, row in zip(ds.labels, ds.features):
            w.writerow([int(yi), *("" if math.isnan(v) else repr(float(v)) for v in row)])


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: np.ndarray
    K: int

    def test_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of == fold)

    def train_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold)

    def splits(self):
        for f in range(self.K):
            yield self.train_rows(f), self.test_rows(f)


def stratified_folds(ds: Dataset, K: int, rng: np.random.Generator) -> FoldAssignment:
    """Assign subjects to K folds, balancing each class across folds to within one.

    Members of each class are shuffled and dealt round-robin; the deal for the
    cases continues where the controls stopped so total fold sizes also stay
    within one of each other.
    """
    if K < 2:
        raise DataError(f"need K >= 2 folds, got {K}")
    if K > ds.n:
        raise DataError(f"K={K} folds exceeds n={ds.n} subjects")
    fold_of = np.empty(ds.n, dtype=np.int64)
    start = 0
    for cls in (0, 1):
        members = np.flatnonzero(ds.labels == cls)
        if len(members) < K:
            raise DataError(
                f"class {cls} has {len(members)} members, too few to place one in each of {K} folds"
            )
        members = rng.permutation(members)
        fold_of[members] = (start + np.arange(len(members))) % K
        start = (start + len(members)) % K
    return FoldAssignment(fold_of, K)


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    sd: np.ndarray

    def transform(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        safe = np.where(self.sd > 0, self.sd, 1.0)
        z = (x - self.mean) / safe
        return np.where(self.sd > 0, z, 0.0)


def fit_standardizer(x: np.ndarray) -> Standardizer:
    x = np.asarray(x, dtype=float)
    counts = np.sum(~np.isnan(x), axis=0)
    if np.any(counts < 2):
        k = int(np.flatnonzero(counts < 2)[0])
        raise DataError(f"column {k} has fewer than 2 non-missing values")
    mean = np.nanmean(x, axis=0)
    sd = np.nanstd(x, axis=0, ddof=1)
    # exactly-constant columns can leave rounding noise in the sd
    sd = np.where(np.nanmax(x, axis=0) == np.nanmin(x, axis=0), 0.0, sd)
    return Standardizer(mean, sd)


def standardize(ds: Dataset) -> tuple[Dataset, Standardizer]:
    """Z-score every column with the n-1 sd; zero-sd columns map to zeros."""
    params = fit_standardizer(ds.features)
    return Dataset(params.transform(ds.features), ds.labels, ds.names), params


def as_matrix(x: Sequence) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x.reshape(1, -1) if x.ndim == 1 else x
