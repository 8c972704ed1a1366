"""Repeated double cross-validation on one fixed dataset.

The outer folds estimate performance; inside each outer training part an
inner CV picks the tuning parameter.  Every repetition reshuffles the folds.
"""
import numpy as np

from qbplab import build_design, rdcv, sample_dataset

ds, _ = sample_dataset(build_design("3"), np.random.default_rng(3), n=120)
result = rdcv(ds, ["qbp", "plr-lasso", "pls-lda"], reps=2, K_outer=5, K_inner=5, seed=9)
for row in result.rows:
    print(f"rep {row.rep}  {row.method:10s} AUC {row.auc:.3f}  chosen per outer fold: {row.params}")
