"""The classical comparators on two kinds of signal.

A mean shift suits every linear method.  A pure variance shift is invisible
to them and only QBP (and, weakly, kNN) picks it up.
"""
import warnings

import numpy as np

from qbplab import METHOD_NAMES, Dataset, auc, get_method


def draw(rng, n, shift, spread):
    y = np.r_[np.zeros(n // 2, int), np.ones(n - n // 2, int)]
    x = rng.standard_normal((n, 6))
    x[y == 1, :3] = x[y == 1, :3] * spread + shift
    return Dataset(x, y, tuple(f"b{k + 1}" for k in range(6)))


rng = np.random.default_rng(11)
scenarios = {"mean shift": (0.8, 1.0), "variance shift": (0.0, 2.0)}
print(f"{'method':10s}" + "".join(f"{s:>16s}" for s in scenarios))
warnings.simplefilter("ignore")
results = {}
for label, (shift, spread) in scenarios.items():
    train, valid = draw(rng, 200, shift, spread), draw(rng, 4000, shift, spread)
    for name in METHOD_NAMES:
        method = get_method(name)
        model = method.fit(train, method.default_params(train))
        results[name, label] = auc(method.rank_scores(model, valid.features), valid.labels)
for name in METHOD_NAMES:
    print(f"{name:10s}" + "".join(f"{results[name, s]:16.3f}" for s in scenarios))
