"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``; the lines are
also collected into the pytest terminal summary.  The simulation criteria
share one benchmark run per design (master seed 2024, validation sets of
2000 subjects).
"""
import time
import warnings

import numpy as np
import pytest

from fixtures import TABLE3_TDS, table1_dataset, table3_model, table3_subject
from qbplab.baselines import (
    fit_logistic,
    fit_penalized_logistic,
    lambda_max,
    log_likelihood,
    score_vector,
)
from qbplab.cv import simulate_benchmark
from qbplab.data import Dataset
from qbplab.methods import METHOD_NAMES
from qbplab.metrics import auc_rank, roc_curve
from qbplab.qbp import QbpConfig, TailOverlapWarning, fit_qbp

SEED = 2024
VALIDATION_N = 2000
REPORT = {}


def record(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    REPORT[number] = line
    print(line)
    assert ok, line


_RUNS = {}


def _bench(design, methods=METHOD_NAMES, reps=50):
    key = (design, tuple(methods), reps)
    if key not in _RUNS:
        t = time.perf_counter()
        res = simulate_benchmark(design, methods, reps=reps, seed=SEED,
                                 validation_n=VALIDATION_N, threads=1)
        _RUNS[key] = (res, time.perf_counter() - t)
    return _RUNS[key]


def _means(res):
    return {m: res.mean(m) for m in res.methods()}


def _fmt(means):
    return " ".join(f"{m}={v:.3f}" for m, v in means.items())


# ---------------------------------------------------------------- 1, 2


def test_criterion_01_table_1_2():
    t = time.perf_counter()
    bm = fit_qbp(table1_dataset(), QbpConfig(ratio_bounds=(2, 3, 5), max_scores=(1, 2, 3)))
    bm = bm.biomarkers[0]
    elapsed = time.perf_counter() - t
    # table order is outer to inner on the left, inner to outer on the right
    checks = [
        tuple(reversed(bm.left.cutpoints)) == (273, 372, 424),
        bm.right.cutpoints == (644, 713, 880),
        np.allclose(tuple(reversed(bm.left.exceed_ratios)), (0, 0.62, 2.25), atol=0.01),
        np.allclose(bm.right.exceed_ratios, (4.07, 4.8, 3), atol=0.01),
        tuple(reversed(bm.left.exceed_scores)) == (0, 0, 1),
        bm.right.exceed_scores == (1, 1, 0),
        bm.left.interval_scores == (1, 1, 1),
        bm.right.interval_scores == (-1, -2, -2),
        elapsed < 1.0,
    ]
    record(1, all(checks),
           f"cutpoints {bm.left.cutpoints[::-1]} | {bm.right.cutpoints}; "
           f"ratios {np.round(bm.left.exceed_ratios[::-1], 3).tolist()} | "
           f"{np.round(bm.right.exceed_ratios, 3).tolist()}; "
           f"V {bm.left.interval_scores} | {bm.right.interval_scores}; {elapsed * 1e3:.1f} ms")


def test_criterion_02_table_3():
    t = time.perf_counter()
    model = table3_model()
    got = {k: float(model.score(table3_subject(k)[None])[0]) for k in "abc"}
    elapsed = time.perf_counter() - t
    record(2, got == TABLE3_TDS and elapsed < 1.0,
           f"TDS a={got['a']:g} b={got['b']:g} c={got['c']:g}; {elapsed * 1e3:.1f} ms")


# ---------------------------------------------------------------- 3, 4, 5


def test_criterion_03_null_unbiased():
    res, elapsed = _bench("1")
    means = _means(res)
    ok = all(0.48 <= v <= 0.52 for v in means.values()) and elapsed < 600
    ok = ok and set(means) == set(METHOD_NAMES)
    record(3, ok, f"design 1, 50 reps: {_fmt(means)}; {elapsed:.0f} s")


def test_criterion_04_variance_shift():
    res, _ = _bench("4")
    means = _means(res)
    blind = ["lr", "plr-lasso", "plr-en", "plr-ridge", "pclr", "lda", "pls-lda"]
    qbp = means["qbp"]
    others = max(v for m, v in means.items() if m != "qbp")
    ok = (qbp >= 0.58 and all(abs(means[m] - 0.5) <= 0.02 for m in blind) and qbp > others)
    record(4, ok, f"design 4, 50 reps: {_fmt(means)}")


def test_criterion_05_mean_shift():
    res3, _ = _bench("3")
    res2, _ = _bench("2")
    m3, m2 = _means(res3), _means(res2)
    best3 = max(m3.values())
    ok = (m3["lda"] >= 0.95 and m3["pls-lda"] >= 0.95 and m3["qbp"] >= best3 - 0.06
          and m3["qbp"] < best3 and m2["qbp"] < max(m2.values()))
    record(5, ok, f"design 3: {_fmt(m3)} | design 2 qbp={m2['qbp']:.3f} "
                  f"best={max(m2, key=m2.get)}={max(m2.values()):.3f}")


# ---------------------------------------------------------------- 6, 7


def test_criterion_06_auc_oracle():
    rng = np.random.default_rng(SEED)
    worst, min_tied = 0.0, 1.0
    for _ in range(1000):
        n = int(rng.integers(10, 200))
        y = rng.integers(0, 2, n)
        y[:2] = (0, 1)
        s = rng.integers(0, max(2, n // 6), n).astype(float)  # few levels, many ties
        s[rng.uniform(size=n) < 0.3] = s[0]                    # and a heavy tie block
        tied = 1 - np.unique(s).size / n
        min_tied = min(min_tied, tied)
        worst = max(worst, abs(roc_curve(s, y).auc - auc_rank(s, y)))
    record(6, worst < 1e-12 and min_tied >= 0.3,
           f"1000 sets, min tied share {min_tied:.2f}, max |trapezoid - rank| = {worst:.1e}")


def _logistic_data(rng, n=200, r=10):
    x = rng.standard_normal((n, r)) @ (np.eye(r) + 0.3 * rng.standard_normal((r, r)))
    beta = rng.normal(0, 0.4, r)
    y = (rng.uniform(size=n) < 1 / (1 + np.exp(-(0.2 + x @ beta)))).astype(int)
    return Dataset(x, y, tuple(f"m{k}" for k in range(r)))


def test_criterion_07_penalized_regression():
    rng = np.random.default_rng(SEED)
    max_diff, max_grad, max_fd_rel, shrink_ok = 0.0, 0.0, 0.0, True
    for _ in range(20):
        ds = _logistic_data(rng)
        mle = fit_logistic(ds)
        cd = fit_penalized_logistic(ds, "lasso", 0.0, tol=1e-12)
        max_diff = max(max_diff, float(np.max(np.abs(
            np.r_[cd.intercept, cd.coef] - np.r_[mle.intercept, mle.coef]))))
        g = score_vector(mle.intercept, mle.coef, ds.features, ds.labels)
        max_grad = max(max_grad, float(np.max(np.abs(g))))
        # finite differences away from the optimum, where the gradient is not ~0
        b = np.r_[mle.intercept, mle.coef] + rng.normal(0, 0.1, ds.r + 1)
        ga = score_vector(b[0], b[1:], ds.features, ds.labels)
        fd = np.empty_like(ga)
        for j in range(b.size):
            e = np.zeros_like(b)
            e[j] = 1e-5
            fd[j] = (log_likelihood((b + e)[0], (b + e)[1:], ds.features, ds.labels)
                     - log_likelihood((b - e)[0], (b - e)[1:], ds.features, ds.labels)) / 2e-5
        max_fd_rel = max(max_fd_rel, float(np.max(np.abs(fd - ga) / np.maximum(np.abs(ga), 1e-3))))
        for penalty in ("lasso", "elastic-net", "ridge"):
            lam = 1e6 if penalty != "ridge" else 1e6 * lambda_max(ds, "ridge")
            big = fit_penalized_logistic(ds, penalty, lam)
            shrink_ok &= bool(np.max(np.abs(big.coef)) < 1e-6)
    ok = max_diff < 1e-6 and max_grad < 1e-6 and max_fd_rel < 1e-4 and shrink_ok
    record(7, ok, f"20 datasets: max |CD(0) - IRLS| = {max_diff:.1e}, max |grad| = "
                  f"{max_grad:.1e}, max FD rel err = {max_fd_rel:.1e}, huge-lambda slopes 0: "
                  f"{shrink_ok}")


# ---------------------------------------------------------------- 8, 9


def test_criterion_08_sample_size_selection():
    small, _ = _bench("7a", ["qbp"], reps=30)
    large, _ = _bench("7b", ["qbp"], reps=30)
    a, b = small.mean("qbp", "accuracy"), large.mean("qbp", "accuracy")
    record(8, b - a >= 0.10, f"QBP selection accuracy n=100 {a:.3f} -> n=400 {b:.3f} "
                             f"(gain {b - a:+.3f}, 30 reps)")


def test_criterion_09_determinism(tmp_path):
    kw = dict(design="5", methods=list(METHOD_NAMES), reps=4, seed=SEED, validation_n=500)
    paths = []
    for i, threads in enumerate((1, 1, 2)):
        res = simulate_benchmark(threads=threads, **kw)
        paths.append(tmp_path / f"run{i}.csv")
        res.to_csv(paths[-1])
    same_threads = paths[0].read_bytes() == paths[1].read_bytes()
    rows = [sorted(p.read_text().splitlines()) for p in paths]
    other_threads = rows[0] == rows[2]
    record(9, same_threads and other_threads,
           f"rerun with 1 thread byte-identical: {same_threads}; "
           f"2 threads rows identical: {other_threads}")


# ---------------------------------------------------------------- 10


def _invariance_instance(rng):
    # class sizes 101 and 201 put every default proportion on an order statistic
    r = 3
    x0 = rng.standard_normal((101, r))
    x1 = rng.standard_normal((201, r)) * rng.uniform(0.4, 2.5, r) + rng.uniform(-1, 1, r)
    y = np.r_[np.zeros(101, dtype=int), np.ones(201, dtype=int)]
    return np.r_[x0, x1], y


def _monotone_maps(rng):
    a, b = rng.uniform(0.2, 3), rng.uniform(-5, 5)
    return [
        lambda v: a * v + b,
        lambda v: np.exp(v / 2),
        lambda v: v ** 3 + v,
        lambda v: np.arctan(v) * 10,
    ]


def test_criterion_10_invariances():
    rng = np.random.default_rng(SEED)
    cfg = QbpConfig(ratio_bounds=(1.5, 2, 3), max_scores=(1, 2, 3))
    names = ("a", "b", "c")
    failures = {"monotone": 0, "label-swap": 0, "magnitude": 0, "roc-complement": 0}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailOverlapWarning)
        for i in range(200):
            x, y = _invariance_instance(rng)
            probe = rng.standard_normal((300, 3)) * 2
            model = fit_qbp(Dataset(x, y, names), cfg)
            f = _monotone_maps(rng)[i % 4]
            moved = fit_qbp(Dataset(f(x), y, names), cfg)
            same = all(
                (p.left.exceed_scores, p.left.interval_scores, p.right.exceed_scores,
                 p.right.interval_scores)
                == (q.left.exceed_scores, q.left.interval_scores, q.right.exceed_scores,
                    q.right.interval_scores)
                for p, q in zip(model.biomarkers, moved.biomarkers))
            same &= np.array_equal(model.score(probe), moved.score(f(probe)))
            failures["monotone"] += not same

            swapped = fit_qbp(Dataset(x, 1 - y, names), cfg)
            anti = all(
                np.array_equal(np.negative(p.left.interval_scores), q.left.interval_scores)
                and np.array_equal(np.negative(p.right.interval_scores), q.right.interval_scores)
                for p, q in zip(model.biomarkers, swapped.biomarkers))
            anti &= np.array_equal(-model.score(probe), swapped.score(probe))
            failures["label-swap"] += not anti

            rcfg = QbpConfig(ratio_bounds=tuple(np.sort(rng.uniform(1.05, 4, 3))),
                             max_scores=tuple(np.sort(rng.uniform(0.5, 9, 3))))
            rfit = fit_qbp(Dataset(x, y, names), rcfg)
            mono = True
            for bm in rfit.biomarkers:
                for tail in (bm.left, bm.right):
                    v = np.asarray(tail.interval_scores)
                    mono &= bool(np.all(np.diff(np.abs(v)) >= 0))
                    sign = 1 if tail.predominant == 1 else -1
                    mono &= bool(np.all(v[v != 0] * sign > 0))
            failures["magnitude"] += not mono

            s = np.round(rng.standard_normal(80), 1)
            lab = rng.integers(0, 2, 80)
            lab[:2] = (0, 1)
            a, b = roc_curve(s, lab), roc_curve(-s, lab)
            reflected = sorted(zip(1 - a.fpr, 1 - a.tpr))
            comp = (abs(a.auc + b.auc - 1) < 1e-12
                    and np.allclose(reflected, sorted(zip(b.fpr, b.tpr)), atol=1e-12))
            failures["roc-complement"] += not comp
    record(10, not any(failures.values()),
           "200 instances each, failures: " + ", ".join(f"{k}={v}" for k, v in failures.items()))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
