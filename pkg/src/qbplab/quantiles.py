"""Empirical quantiles and distribution functions."""
from __future__ import annotations

import numpy as np

# Interpolation positions closer than this to an integer are snapped, so that
# e.g. p=0.01 with n=101 lands exactly on an order statistic.
_SNAP = 1e-9


def quantile_sorted(sorted_values: np.ndarray, p) -> np.ndarray | float:
    """Linear interpolation between order statistics at h = (n - 1) p + 1.

    ``sorted_values`` must be ascending and nonempty; ``p`` may be a scalar or
    an array with entries in [0, 1].
    """
    x = np.asarray(sorted_values, dtype=float)
    n = x.shape[0]
    if n == 0:
        raise ValueError("empty distribution")
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr < 0) | (p_arr > 1)) or np.any(np.isnan(p_arr)):
        raise ValueError(f"proportion outside [0, 1]: {p}")
    h = (n - 1) * p_arr
    lo = np.floor(h)
    frac = h - lo
    up = frac > 1 - _SNAP
    lo = np.where(up, lo + 1, lo)
    frac = np.where(up | (frac < _SNAP), 0.0, frac)
    lo = np.clip(lo.astype(np.int64), 0, n - 1)
    hi = np.minimum(lo + 1, n - 1)
    out = np.where(frac == 0.0, x[lo], x[lo] + frac * (x[hi] - x[lo]))
    return float(out) if out.ndim == 0 else out


def ecdf_sorted(sorted_values: np.ndarray, x) -> np.ndarray | float:
    """Proportion of values <= x (right-continuous, ties counted)."""
    v = np.asarray(sorted_values, dtype=float)
    out = np.searchsorted(v, x, side="right") / v.shape[0]
    return float(out) if np.ndim(out) == 0 else out


class EmpiricalDistribution:
    """Sorted sample of one biomarker within one class."""

    __slots__ = ("sorted_values",)

    def __init__(self, values):
        v = np.asarray(values, dtype=float).ravel()
        v = v[~np.isnan(v)]
        if v.size == 0:
            raise ValueError("empty distribution")
        v = np.sort(v)
        v.flags.writeable = False
        self.sorted_values = v

    @property
    def n(self) -> int:
        return self.sorted_values.shape[0]

    def quantile(self, p):
        return quantile_sorted(self.sorted_values, p)

    def ecdf(self, x):
        return ecdf_sorted(self.sorted_values, x)

    def __repr__(self):
        return f"EmpiricalDistribution(n={self.n})"


def empirical_quantile(d: EmpiricalDistribution, p):
    return d.quantile(p)


def ecdf(d: EmpiricalDistribution, x):
    return d.ecdf(x)
