import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbplab.quantiles import EmpiricalDistribution, ecdf, empirical_quantile

TEN = EmpiricalDistribution(np.arange(1, 11))
FOUR = EmpiricalDistribution([4, 2, 3, 1])


@pytest.mark.parametrize("p, expected", [(0, 1.0), (0.5, 5.5), (0.95, 9.55), (1, 10.0)])
def test_quantile_examples(p, expected):
    assert empirical_quantile(TEN, p) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("x, expected", [(2, 0.5), (0, 0.0), (4, 1.0), (2.5, 0.5)])
def test_ecdf_examples(x, expected):
    assert ecdf(FOUR, x) == expected


def test_matches_numpy_linear():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(37)
    p = rng.uniform(size=50)
    np.testing.assert_allclose(EmpiricalDistribution(v).quantile(p), np.quantile(v, p), rtol=0,
                               atol=1e-12)


def test_order_statistic_is_exact():
    # (n - 1) p is an integer here but not in floating point without snapping
    d = EmpiricalDistribution(np.linspace(0, 1, 101) ** 3)
    assert d.quantile(0.07) == d.sorted_values[7]


def test_ties_kept():
    d = EmpiricalDistribution([1, 1, 1, 2])
    assert d.ecdf(1) == 0.75
    assert d.n == 4


def test_missing_dropped_and_errors():
    assert EmpiricalDistribution([1.0, np.nan, 3.0]).n == 2
    with pytest.raises(ValueError):
        EmpiricalDistribution([np.nan])
    with pytest.raises(ValueError):
        TEN.quantile(1.5)


@settings(max_examples=200, deadline=None)
@given(values=st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40),
       p1=st.floats(0, 1), p2=st.floats(0, 1))
def test_quantile_monotone_and_consistent(values, p1, p2):
    d = EmpiricalDistribution(values)
    lo, hi = sorted((p1, p2))
    assert d.quantile(lo) <= d.quantile(hi)
    assert d.ecdf(d.quantile(lo)) >= lo - 1.0 / d.n


@settings(max_examples=100, deadline=None)
@given(values=st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=30),
       xs=st.lists(st.floats(-2e3, 2e3), min_size=2, max_size=10))
def test_ecdf_nondecreasing_bounded(values, xs):
    d = EmpiricalDistribution(values)
    f = d.ecdf(np.sort(xs))
    assert np.all(np.diff(f) >= 0)
    assert np.all((f >= 0) & (f <= 1))
