"""QBP on a single biomarker whose cases are more spread out than controls.

The class means are equal, so a mean-based classifier sees nothing.  QBP
looks at each tail separately: the cases own both tails, every tail earns
positive interval scores, and subjects far out on either side get a high
total disease score (TDS).
"""
import numpy as np

from qbplab import Dataset, QbpConfig, auc, fit_qbp

rng = np.random.default_rng(7)
controls = rng.normal(100, 10, 400)
cases = rng.normal(100, 18, 400)
x = np.r_[controls, cases][:, None]
y = np.r_[np.zeros(400, int), np.ones(400, int)]
ds = Dataset(x, y, ("marker",))

model = fit_qbp(ds, QbpConfig(ratio_bounds=(1.5, 2, 3), max_scores=(1, 2, 3)))
bm = model.biomarkers[0]

print("Tail characteristics (inner to outer)")
for side, tail in (("left", bm.left), ("right", bm.right)):
    owner = {None: "none", 0: "controls", 1: "cases"}[tail.predominant]
    print(f"  {side:5s} predominant: {owner}")
    print(f"        cutpoints      {np.round(tail.cutpoints, 1)}")
    print(f"        exceedratios   {np.round(tail.exceed_ratios, 2)}")
    print(f"        exceedscores   {tail.exceed_scores}")
    print(f"        interval score {tail.interval_scores}")

probe = np.array([[60.0], [85.0], [100.0], [115.0], [140.0]])
print("\nTDS for a few new values")
for value, tds in zip(probe[:, 0], model.score(probe)):
    print(f"  x = {value:5.1f}  ->  TDS = {tds:+.0f}")

valid = np.r_[rng.normal(100, 10, 2000), rng.normal(100, 18, 2000)][:, None]
labels = np.r_[np.zeros(2000, int), np.ones(2000, int)]
print(f"\nValidation AUC of the TDS: {auc(model.score(valid), labels):.3f}")
