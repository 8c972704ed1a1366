"""Hand-built inputs shared by the unit and acceptance tests."""
import numpy as np

from qbplab.data import Dataset
from qbplab.qbp import BiomarkerFit, FittedQbp, QbpConfig, TailFit


def _from_anchors(anchors, n=1000):
    """Sorted sample of size n passing through (0-based index, value) anchors, linear in between."""
    idx, val = zip(*sorted(anchors))
    return np.interp(np.arange(n), idx, val)


# Quantiles at p use order statistics (n-1)p and (n-1)p + 1 (0-based) for n = 1000,
# so pinning both to one value makes the quantile exactly that value.
_PAIRS = {0.01: (9, 10), 0.05: (49, 50), 0.10: (99, 100),
          0.90: (899, 900), 0.95: (949, 950), 0.99: (989, 990)}


def _pin(quantiles):
    return [(i, q) for p, q in quantiles.items() for i in _PAIRS[p]]


def table1_samples():
    """Controls and cases reproducing the worked biomarker's percentile and tail-area rows.

    Cases:    q = 357, 380, 396 | 644, 713, 880;  #<=273 = 0, #<=372 = 31, #<=424 = 225
    Controls: q = 273, 372, 424 | 796, 849, 947;  #<=644 = 593, #<=713 = 760, #<=880 = 970
    """
    cases = _from_anchors(
        _pin({0.01: 357, 0.05: 380, 0.10: 396, 0.90: 644, 0.95: 713, 0.99: 880})
        + [(0, 300.0), (30, 372.0), (31, 373.0), (224, 424.0), (225, 425.0), (999, 1000.0)]
    )
    controls = _from_anchors(
        _pin({0.01: 273, 0.05: 372, 0.10: 424, 0.90: 796, 0.95: 849, 0.99: 947})
        + [(0, 200.0), (592, 644.0), (593, 645.0), (759, 713.0), (760, 714.0),
           (969, 880.0), (970, 881.0), (999, 1100.0)]
    )
    return controls, cases


def table1_dataset():
    controls, cases = table1_samples()
    x = np.r_[controls, cases][:, None]
    y = np.r_[np.zeros(controls.size, dtype=int), np.ones(cases.size, dtype=int)]
    return Dataset(x, y, ("marker",))


# Table 3: interval scores listed as I_L3, I_L2, I_L1, I_0, I_R1, I_R2, I_R3.
TABLE3_SCORES = np.array([
    [1, 1, 1, 0, -1, -2, -2],
    [-1, -1, -1, 0, 0, 0, 0],
    [2, 2, 1, 0, 1, 2, 3],
    [-3, -1, -1, 0, 0, 0, 3],
    [-3, -2, 0, 0, 0, 2, 2],
], dtype=float)

# Cutpoints inner to outer; a representative value for every interval.
TABLE3_LEFT_CUTS = (-1.0, -2.0, -3.0)
TABLE3_RIGHT_CUTS = (1.0, 2.0, 3.0)
INTERVAL_VALUE = {"L3": -4.0, "L2": -2.5, "L1": -1.5, "0": 0.0, "R1": 1.5, "R2": 2.5, "R3": 4.0}

TABLE3_SUBJECTS = {
    "a": ("L2", "0", "0", "R2", "R2"),
    "b": ("0", "R1", "R1", "L1", "0"),
    "c": ("R1", "L1", "0", "L3", "L2"),
}
TABLE3_TDS = {"a": 3.0, "b": 0.0, "c": -7.0}


def _tail(side, scores, cuts):
    nonzero = [s for s in scores if s != 0]
    pred = None if not nonzero else (1 if nonzero[0] > 0 else 0)
    e = tuple(int(s != 0) for s in scores)
    return TailFit(side, pred, cuts, tuple(0.0 for _ in cuts), e, tuple(float(s) for s in scores))


def table3_model():
    bms = []
    for row in TABLE3_SCORES:
        left = row[2::-1]  # I_L1, I_L2, I_L3
        right = row[4:]
        bms.append(BiomarkerFit(_tail("left", left, TABLE3_LEFT_CUTS),
                                _tail("right", right, TABLE3_RIGHT_CUTS)))
    return FittedQbp(tuple(bms), QbpConfig(), tuple(f"b{k + 1}" for k in range(5)))


def table3_subject(key):
    return np.array([INTERVAL_VALUE[iv] for iv in TABLE3_SUBJECTS[key]])
