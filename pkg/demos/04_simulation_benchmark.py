"""A short run of the simulation protocol on the variance-shift design.

Each repetition draws a training set, tunes every method by 6-fold CV,
refits, and scores a fresh validation set.  The repetition count here is
tiny; pass a larger ``reps`` (or use ``qbplab bench``) for stable means.
"""
from qbplab import simulate_benchmark

methods = ["qbp", "lr", "plr-lasso", "lda", "knn"]
result = simulate_benchmark("4", methods, reps=3, seed=1, validation_n=1000)
print(f"{'method':10s}{'mean AUC':>10s}{'sd':>8s}{'markers kept':>14s}")
for method, reps, mean, sd in result.summary():
    kept = result.mean(method, "n_selected")
    print(f"{method:10s}{mean:10.3f}{sd:8.3f}{kept:14.1f}")
