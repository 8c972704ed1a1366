"""Quantile based prediction (QBP).

Each biomarker contributes through its two tails. In a tail, the class whose
quantile at the innermost proportion sits further out is *predominant*. The
other class's quantiles become cutpoints, the predominant class's mass beyond
each cutpoint relative to the nominal proportion is the *exceedratio*, and
exceedratios clearing their lower bounds switch on the maximal interval
scores. A subject's disease score on a biomarker is the (weighted) score of
the interval its value falls in; the total disease score (TDS) sums these.

Index convention used throughout: position ``s = 0..m`` runs from the
innermost proportion (0.10 / 0.90 by default) outward.  ``interval_scores[s]``
belongs to the interval between cutpoint ``s`` and cutpoint ``s + 1`` (the
last one is unbounded), matching the table layout in the method description.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .data import Dataset, DataError, as_matrix
from .quantiles import EmpiricalDistribution

FORMAT_VERSION = 1

LEFT, RIGHT = "left", "right"


class TailOverlapWarning(UserWarning):
    """The inner left cutpoint lies at or above the inner right cutpoint."""


@dataclass(frozen=True)
class QbpConfig:
    left_props: tuple = (0.10, 0.05, 0.01)
    right_props: Optional[tuple] = None
    ratio_bounds: tuple = (2.0, 3.0, 5.0)
    max_scores: tuple = (1.0, 2.0, 3.0)
    weights: Optional[tuple] = None

    def __post_init__(self):
        left = tuple(float(p) for p in self.left_props)
        right = (
            tuple(1.0 - p for p in left)
            if self.right_props is None
            else tuple(float(p) for p in self.right_props)
        )
        bounds = tuple(float(b) for b in self.ratio_bounds)
        v = tuple(float(x) for x in self.max_scores)
        if len(left) < 1 or len(right) != len(left):
            raise ValueError("left and right proportion lists must have equal, nonzero length")
        if any(not 0 < p < 0.5 for p in left) or any(a <= b for a, b in zip(left, left[1:])):
            raise ValueError(f"left proportions must be < 0.5 and strictly decreasing: {left}")
        if any(not 0.5 < p < 1 for p in right) or any(a >= b for a, b in zip(right, right[1:])):
            raise ValueError(f"right proportions must be > 0.5 and strictly increasing: {right}")
        if len(bounds) != len(left):
            raise ValueError(f"need {len(left)} exceedratio bounds, got {len(bounds)}")
        if any(b <= 1 for b in bounds):
            raise ValueError(f"exceedratio bounds must all exceed 1: {bounds}")
        if len(v) != len(left):
            raise ValueError(f"need {len(left)} maximal interval scores, got {len(v)}")
        if any(x <= 0 for x in v) or any(a > b for a, b in zip(v, v[1:])):
            raise ValueError(f"maximal interval scores must be positive and nondecreasing: {v}")
        if self.weights is not None:
            w = tuple(float(x) for x in self.weights)
            if any(x < 0 for x in w):
                raise ValueError("weights must be nonnegative")
            object.__setattr__(self, "weights", w)
        object.__setattr__(self, "left_props", left)
        object.__setattr__(self, "right_props", right)
        object.__setattr__(self, "ratio_bounds", bounds)
        object.__setattr__(self, "max_scores", v)

    @property
    def m(self) -> int:
        return len(self.left_props) - 1

    def to_dict(self) -> dict:
        return {
            "left_props": list(self.left_props),
            "right_props": list(self.right_props),
            "ratio_bounds": list(self.ratio_bounds),
            "max_scores": list(self.max_scores),
            "weights": None if self.weights is None else list(self.weights),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QbpConfig":
        return cls(
            left_props=tuple(d["left_props"]),
            right_props=tuple(d["right_props"]),
            ratio_bounds=tuple(d["ratio_bounds"]),
            max_scores=tuple(d["max_scores"]),
            weights=None if d.get("weights") is None else tuple(d["weights"]),
        )


@dataclass(frozen=True)
class TailFit:
    side: str
    predominant: Optional[int]
    cutpoints: tuple
    exceed_ratios: tuple
    exceed_scores: tuple
    interval_scores: tuple

    @property
    def active(self) -> bool:
        return self.predominant is not None and any(v != 0 for v in self.interval_scores)

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "predominant": self.predominant,
            "cutpoints": list(self.cutpoints),
            "exceed_ratios": list(self.exceed_ratios),
            "exceed_scores": list(self.exceed_scores),
            "interval_scores": list(self.interval_scores),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TailFit":
        return cls(
            d["side"],
            d["predominant"],
            tuple(float(x) for x in d["cutpoints"]),
            tuple(float(x) for x in d["exceed_ratios"]),
            tuple(int(x) for x in d["exceed_scores"]),
            tuple(float(x) for x in d["interval_scores"]),
        )


# ---------------------------------------------------------------- tail steps


def determine_predominance(controls: EmpiricalDistribution, cases: EmpiricalDistribution,
                           p0_left: float, p0_right: float):
    """Return (left, right) predominant class, ``None`` when the quantiles tie."""
    q0, q1 = controls.quantile(p0_left), cases.quantile(p0_left)
    left = 1 if q0 > q1 else 0 if q0 < q1 else None
    q0, q1 = controls.quantile(p0_right), cases.quantile(p0_right)
    right = 0 if q0 > q1 else 1 if q0 < q1 else None
    return left, right


def compute_cutpoints(nonpredominant: EmpiricalDistribution, props: Sequence[float]) -> tuple:
    return tuple(float(c) for c in nonpredominant.quantile(np.asarray(props, dtype=float)))


def exceed_ratios(predominant: EmpiricalDistribution, cutpoints: Sequence[float],
                  props: Sequence[float], side: str) -> tuple:
    """Tail mass of the predominant class beyond each cutpoint over the nominal proportion."""
    c = np.asarray(cutpoints, dtype=float)
    p = np.asarray(props, dtype=float)
    mass = predominant.ecdf(c)
    if side == LEFT:
        ratios = mass / p
    elif side == RIGHT:
        ratios = (1.0 - mass) / (1.0 - p)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return tuple(float(x) for x in ratios)


def exceed_scores(ratios: Sequence[float], bounds: Sequence[float]) -> tuple:
    if len(ratios) != len(bounds):
        raise ValueError(f"{len(ratios)} exceedratios but {len(bounds)} bounds")
    return tuple(int(r >= b) for r, b in zip(ratios, bounds))


def interval_scores(e: Sequence[int], v: Sequence[float], predominant: Optional[int],
                    side: str = LEFT) -> tuple:
    """Running maximum of ``v[s] * e[s]``, signed + for cases and - for controls.

    ``side`` does not change the formula; the sign always follows the
    predominant class of the tail being scored.
    """
    if predominant is None:
        return tuple(0.0 for _ in e)
    if len(e) != len(v):
        raise ValueError(f"{len(e)} exceedscores but {len(v)} maximal scores")
    sign = 1.0 if predominant == 1 else -1.0
    mags = np.maximum.accumulate(np.asarray(v, dtype=float) * np.asarray(e, dtype=float))
    return tuple(float(sign * x) if x != 0 else 0.0 for x in mags)


@dataclass(frozen=True)
class _TailGeometry:
    """Config-independent part of a tail: predominance, cutpoints, exceedratios."""

    side: str
    predominant: Optional[int]
    cutpoints: tuple
    exceed_ratios: tuple

    def score(self, bounds, v) -> TailFit:
        if self.predominant is None:
            zeros = tuple(0 for _ in self.cutpoints)
            return TailFit(self.side, None, self.cutpoints, self.exceed_ratios, zeros,
                           tuple(0.0 for _ in self.cutpoints))
        e = exceed_scores(self.exceed_ratios, bounds)
        return TailFit(self.side, self.predominant, self.cutpoints, self.exceed_ratios, e,
                       interval_scores(e, v, self.predominant, self.side))


def _tail_geometry(controls, cases, props, side, predominant) -> _TailGeometry:
    if predominant is None:
        # No group to anchor on; cutpoints are recorded from the controls for
        # audit only, the tail scores 0 everywhere.
        cuts = compute_cutpoints(controls, props)
        return _TailGeometry(side, None, cuts, tuple(0.0 for _ in props))
    pred, nonpred = (cases, controls) if predominant == 1 else (controls, cases)
    cuts = compute_cutpoints(nonpred, props)
    return _TailGeometry(side, predominant, cuts, exceed_ratios(pred, cuts, props, side))


def _geometry(ds: Dataset, left_props, right_props) -> list:
    ds.require_both_classes()
    out = []
    for k in range(ds.r):
        col = ds.features[:, k]
        ok = ~np.isnan(col)
        c0, c1 = col[ok & (ds.labels == 0)], col[ok & (ds.labels == 1)]
        if c0.size < 2 or c1.size < 2:
            raise DataError(
                f"biomarker {ds.names[k]!r} needs >= 2 non-missing values per class "
                f"(controls {c0.size}, cases {c1.size})"
            )
        controls, cases = EmpiricalDistribution(c0), EmpiricalDistribution(c1)
        dl, dr = determine_predominance(controls, cases, left_props[0], right_props[0])
        out.append((
            _tail_geometry(controls, cases, left_props, LEFT, dl),
            _tail_geometry(controls, cases, right_props, RIGHT, dr),
        ))
    return out


# ---------------------------------------------------------------- fitted model


@dataclass(frozen=True)
class BiomarkerFit:
    left: TailFit
    right: TailFit


@dataclass(frozen=True)
class FittedQbp:
    biomarkers: tuple
    config: QbpConfig
    names: tuple = ()
    weights: tuple = ()
    _arrays: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        r = len(self.biomarkers)
        w = self.weights or self.config.weights or tuple(1.0 for _ in range(r))
        if len(w) != r:
            raise ValueError(f"{len(w)} weights for {r} biomarkers")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"b{k + 1}" for k in range(r)))
        lc = np.array([b.left.cutpoints for b in self.biomarkers], dtype=float)
        rc = np.array([b.right.cutpoints for b in self.biomarkers], dtype=float)
        lv = np.array([b.left.interval_scores for b in self.biomarkers], dtype=float)
        rv = np.array([b.right.interval_scores for b in self.biomarkers], dtype=float)
        la = np.array([b.left.predominant is not None for b in self.biomarkers])
        ra = np.array([b.right.predominant is not None for b in self.biomarkers])
        object.__setattr__(self, "_arrays", dict(lc=lc, rc=rc, lv=lv, rv=rv, la=la, ra=ra))

    @property
    def r(self) -> int:
        return len(self.biomarkers)

    def disease_scores(self, x) -> np.ndarray:
        """Per-biomarker weighted disease scores, shape (n, r); missing cells score 0.

        Membership is tested against the left tail first, then the right
        tail, then the central interval.  Tails without a predominant class
        are skipped.
        """
        x = as_matrix(x)
        if x.shape[1] != self.r:
            raise ValueError(f"expected {self.r} biomarkers, got {x.shape[1]}")
        a = self._arrays
        xs = x[:, :, None]
        n_left = np.sum(xs <= a["lc"][None], axis=2)
        n_right = np.sum(xs >= a["rc"][None], axis=2)
        in_left = (n_left > 0) & a["la"][None]
        in_right = (n_right > 0) & a["ra"][None] & ~in_left
        vl = np.take_along_axis(
            np.broadcast_to(a["lv"], (x.shape[0],) + a["lv"].shape),
            np.maximum(n_left - 1, 0)[:, :, None], axis=2)[:, :, 0]
        vr = np.take_along_axis(
            np.broadcast_to(a["rv"], (x.shape[0],) + a["rv"].shape),
            np.maximum(n_right - 1, 0)[:, :, None], axis=2)[:, :, 0]
        ds = np.where(in_left, vl, np.where(in_right, vr, 0.0))
        ds = ds * np.asarray(self.weights)[None, :]
        ds[np.isnan(x)] = 0.0
        return ds + 0.0  # no negative zeros

    def score(self, x) -> np.ndarray:
        """Total disease score per subject; higher is more case-like."""
        return self.disease_scores(x).sum(axis=1)

    def selected(self) -> np.ndarray:
        return np.array([b.left.active or b.right.active for b in self.biomarkers])

    def to_dict(self) -> dict:
        return {
            "format": "qbplab.FittedQbp",
            "version": FORMAT_VERSION,
            "config": self.config.to_dict(),
            "names": list(self.names),
            "weights": list(self.weights),
            "biomarkers": [
                {"name": nm, "left": b.left.to_dict(), "right": b.right.to_dict()}
                for nm, b in zip(self.names, self.biomarkers)
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FittedQbp":
        if d.get("format") != "qbplab.FittedQbp":
            raise ValueError("not a serialized FittedQbp")
        if d.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported FittedQbp version {d.get('version')}")
        bms = tuple(
            BiomarkerFit(TailFit.from_dict(b["left"]), TailFit.from_dict(b["right"]))
            for b in d["biomarkers"]
        )
        return cls(bms, QbpConfig.from_dict(d["config"]), tuple(d["names"]), tuple(d["weights"]))


def _assemble(geometry, config: QbpConfig, names) -> FittedQbp:
    bms = []
    for k, (gl, gr) in enumerate(geometry):
        left = gl.score(config.ratio_bounds, config.max_scores)
        right = gr.score(config.ratio_bounds, config.max_scores)
        if (gl.predominant is not None and gr.predominant is not None
                and gl.cutpoints[0] >= gr.cutpoints[0]):
            warnings.warn(
                f"biomarker {names[k]!r}: tails overlap "
                f"(left cutpoint {gl.cutpoints[0]:g} >= right cutpoint {gr.cutpoints[0]:g}); "
                "left-tail membership takes precedence",
                TailOverlapWarning, stacklevel=3,
            )
        bms.append(BiomarkerFit(left, right))
    w = config.weights if config.weights is not None else tuple(1.0 for _ in geometry)
    if len(w) != len(geometry):
        raise ValueError(f"{len(w)} weights for {len(geometry)} biomarkers")
    return FittedQbp(tuple(bms), config, tuple(names), tuple(w))


def fit_qbp(ds: Dataset, config: QbpConfig | None = None) -> FittedQbp:
    """Fit both tails of every biomarker. Deterministic; missing cells are ignored."""
    config = config or QbpConfig()
    return _assemble(_geometry(ds, config.left_props, config.right_props), config, ds.names)


def fit_qbp_grid(ds: Dataset, configs: Sequence[QbpConfig]) -> list:
    """Fit several configs that share proportions, reusing cutpoints and exceedratios."""
    out, cache = [], {}
    for cfg in configs:
        key = (cfg.left_props, cfg.right_props)
        if key not in cache:
            cache[key] = _geometry(ds, *key)
        out.append(_assemble(cache[key], cfg, ds.names))
    return out


def disease_score(model: FittedQbp, k: int, x) -> float:
    row = np.zeros((1, model.r))
    row[0, k] = np.nan if x is None else x
    return float(model.disease_scores(row)[0, k])


def total_disease_score(model: FittedQbp, subject) -> float:
    s = np.array([np.nan if v is None else v for v in subject], dtype=float)
    return float(model.score(s.reshape(1, -1))[0])


def selected_biomarkers(model: FittedQbp) -> np.ndarray:
    """A biomarker is selected when any interval score in either tail is nonzero."""
    return model.selected()
