import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wifipricing.market import LocalMarket
from wifipricing.monopoly import (
    Scheme,
    flat_revenue,
    flat_threshold,
    optimal_flat_pricing,
    optimal_usage_pricing,
    revenue_ratio,
    search_flat_fee,
    search_usage_price,
    usage_revenue,
)

LN2 = math.log(2)


def test_usage_revenue_examples():
    assert usage_revenue(1 / 3, LocalMarket(1)) == pytest.approx(1 / 6)
    m2 = LocalMarket(1, elasticity=2)
    lo = 2 / 3 - (4 / 9) * 1.0
    assert usage_revenue(2 / 3, m2) == pytest.approx(lo)
    assert usage_revenue(2 / 3 + 1e-12, m2) == pytest.approx(lo)
    assert usage_revenue(0.9, LocalMarket(10, coverage=0.5)) == pytest.approx(0.025)


def test_usage_revenue_edges():
    assert usage_revenue(1.0, LocalMarket(1)) == 0.0
    assert usage_revenue(3.0, LocalMarket(1)) == 0.0
    with pytest.raises(ValueError):
        usage_revenue(0.0, LocalMarket(1))


@pytest.mark.parametrize("k,price,share", [(1.0, 1 / 3, 1 / 6), (2.0, 0.5, 0.25)])
def test_optimal_usage(k, price, share):
    out = optimal_usage_pricing(LocalMarket(100, coverage=0.7, elasticity=k))
    assert out.scheme is Scheme.USAGE_BASED
    assert out.price == pytest.approx(price)
    assert out.revenue == pytest.approx(100 * 0.7 * share)
    assert out.total_usage == pytest.approx(35.0)
    assert out.subscriber_fraction == pytest.approx((k + 1) / (k + 2))


def test_flat_threshold_examples():
    assert flat_threshold(0.0, LocalMarket(1)) == 0.0
    assert flat_threshold(LN2 / 2, LocalMarket(1)) == pytest.approx(0.5)
    assert flat_threshold(0.3, LocalMarket(1, coverage=0.6)) == pytest.approx(0.72135, abs=1e-5)
    assert flat_threshold(1.0, LocalMarket(1)) > 1


def test_flat_revenue_examples():
    m = LocalMarket(1)
    assert flat_revenue(0.0, m) == 0.0
    assert flat_revenue(LN2, m) == pytest.approx(0.0, abs=1e-15)
    assert flat_revenue(LN2 / 2, m) == pytest.approx(LN2 / 4)
    assert flat_revenue(2.0, m) == 0.0


def test_optimal_flat_scales_with_coverage():
    a = optimal_flat_pricing(LocalMarket(1, coverage=0.4))
    b = optimal_flat_pricing(LocalMarket(1, coverage=0.8))
    assert b.price == pytest.approx(2 * a.price)
    assert b.revenue == pytest.approx(2 * a.revenue)
    assert optimal_flat_pricing(LocalMarket(1)).price == pytest.approx(0.34657, abs=1e-5)
    assert a.total_usage == optimal_usage_pricing(LocalMarket(1, coverage=0.4)).total_usage


@pytest.mark.parametrize("k,expected", [(1.0, 1.5 * LN2), (10.0, 0.6 * math.log(11))])
def test_revenue_ratio_values(k, expected):
    assert revenue_ratio(k) == pytest.approx(expected)


def test_revenue_ratio_limit():
    assert 1.0 <= revenue_ratio(1e-6) <= 1 + 1e-5


def test_revenue_ratio_increasing_above_one():
    r = revenue_ratio(np.logspace(-4, 3, 200))
    assert np.all(r > 1)
    assert np.all(np.diff(r) > 0)


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0, 5.0])
def test_grid_search_recovers_closed_forms(k):
    m = LocalMarket(1, elasticity=k)
    p, rev = search_usage_price(m, 1e-4)
    assert p == pytest.approx(k / (k + 2), abs=1e-4)
    fee, _ = search_flat_fee(m, 1e-4)
    assert fee == pytest.approx(math.log1p(k) / 2, abs=1e-4)


@given(st.floats(0.05, 10.0))
def test_usage_revenue_concave_low_regime(k):
    m = LocalMarket(1, elasticity=k)
    p = np.linspace(1e-3, k / (k + 1), 200)
    assert np.all(np.diff(usage_revenue(p, m), 2) <= 1e-12)


@given(st.floats(0.05, 10.0), st.floats(0.05, 1.0))
def test_revenue_nonnegative(k, g):
    m = LocalMarket(10, coverage=g, elasticity=k)
    p = np.linspace(1e-3, 2 * k, 300)
    assert np.all(usage_revenue(p, m) >= -1e-12)
    assert np.all(flat_revenue(np.linspace(0, 2, 300), m) >= 0)
