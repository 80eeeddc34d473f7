import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import reference
from wifipricing.congestion import (
    Scheme,
    aggregate_demand,
    congested_flat_revenue,
    congested_usage_revenue,
    congested_usage_threshold,
    congestion_ratio_sweep,
    optimal_congested_flat,
    optimal_congested_usage,
)
from wifipricing.market import LocalMarket
from wifipricing.monopoly import usage_revenue

LN2 = math.log(2)

# Frozen from tests/reference.py (scipy brentq + quad).
THRESHOLD_P13_CN01 = 0.5204058232020627
REVENUE_P13_CN01 = 14.916860843382372


@pytest.mark.parametrize(
    "theta_th,p,k,expected",
    [(1.0, 0.4, 1.0, 0.0), (0.0, 1 / 3, 1.0, 0.5), (0.5, 0.4, 1.0, 0.3875)],
)
def test_aggregate_demand_examples(theta_th, p, k, expected):
    assert aggregate_demand(theta_th, p, k) == pytest.approx(expected, abs=1e-12)


@given(st.floats(0.0, 1.0), st.floats(0.01, 3.0), st.floats(0.1, 8.0))
def test_aggregate_demand_matches_quadrature(theta_th, p, k):
    assert aggregate_demand(theta_th, p, k) == pytest.approx(reference.demand_integral(theta_th, p, k), abs=1e-9)


def test_threshold_without_congestion():
    t = congested_usage_threshold(1 / 3, LocalMarket(100))
    assert t.theta == pytest.approx(1 / 3, abs=1e-15)
    assert not t.empty_market


def test_threshold_with_congestion_frozen():
    m = LocalMarket(100, congestion_coeff=0.001)
    assert congested_usage_threshold(1 / 3, m).theta == pytest.approx(THRESHOLD_P13_CN01, abs=1e-9)
    assert congested_usage_revenue(1 / 3, m) == pytest.approx(REVENUE_P13_CN01, rel=1e-8)


def test_threshold_heavy_congestion_squeezes_market():
    # The top type never pays congestion from types above it, so only the
    # threshold's approach to 1 signals an emptied market.
    m = LocalMarket(100, congestion_coeff=1e4)
    t = congested_usage_threshold(0.3, m)
    assert t.theta > 1 - 1e-5
    assert congested_usage_revenue(0.3, m) < 1e-6 * m.n_users


def test_threshold_empty_market_above_k():
    t = congested_usage_threshold(1.5, LocalMarket(100, congestion_coeff=0.01))
    assert t.empty_market and t.theta == 1.0


@given(st.floats(0.02, 0.98), st.floats(0.0, 5.0), st.sampled_from([0.5, 1.0, 3.0]))
def test_threshold_is_indifference_root(p, cn, k):
    p *= k
    m = LocalMarket(100, elasticity=k, congestion_coeff=cn / 100)
    t = congested_usage_threshold(p, m)
    assert t.theta == pytest.approx(reference.congested_threshold(p, cn, k), abs=1e-8)


@given(st.floats(0.01, 0.99))
def test_zero_congestion_matches_closed_form(p):
    m = LocalMarket(50, coverage=0.6)
    assert congested_usage_revenue(p, m) == pytest.approx(usage_revenue(p, m), rel=1e-12)


def test_optimal_usage_without_congestion():
    out = optimal_congested_usage(LocalMarket(100), 1e-4)
    assert out.scheme is Scheme.USAGE_BASED
    assert out.price == pytest.approx(1 / 3, abs=1e-4)


def test_optimal_usage_huge_congestion_vanishes():
    out = optimal_congested_usage(LocalMarket(100, congestion_coeff=1e4), 1e-3)
    assert out.revenue < 1e-6 * 100


def test_usage_revenue_nonincreasing_in_c():
    base = LocalMarket(100)
    revs = [optimal_congested_usage(dataclasses.replace(base, congestion_coeff=c), 1e-3).revenue
            for c in np.linspace(0, 0.02, 8)]
    assert np.all(np.diff(revs) <= 1e-12)


def test_optimal_flat_examples():
    m0 = optimal_congested_flat(LocalMarket(100))
    assert m0.revenue == pytest.approx(100 * LN2 / 4)
    m = optimal_congested_flat(LocalMarket(100, congestion_coeff=0.01))
    assert m.revenue == pytest.approx(100 * LN2 / (4 * (1 + 1 / LN2)))
    assert m.revenue == pytest.approx(7.094082, abs=1e-6)
    assert optimal_congested_flat(LocalMarket(100, congestion_coeff=1.0)).price == m0.price


@given(st.floats(0.0, 0.05))
def test_flat_closed_form_is_grid_optimum(c):
    m = LocalMarket(100, congestion_coeff=c)
    fees = np.linspace(0, LN2, 20001)
    best = fees[np.argmax(congested_flat_revenue(fees, m))]
    assert best == pytest.approx(optimal_congested_flat(m).price, abs=1e-4)


def test_ratio_sweep():
    rows = congestion_ratio_sweep(LocalMarket(100), [0.0, 0.005, 0.01], 1e-3)
    assert rows[0][1] == pytest.approx(2 / (3 * LN2), abs=1e-3)
    ratios = [r for _, r in rows]
    assert all(b >= a * (1 - 1e-9) for a, b in zip(ratios, ratios[1:]))
    with pytest.raises(ValueError):
        congestion_ratio_sweep(LocalMarket(100), [])


def test_ratio_exceeds_one_for_high_elasticity():
    # Usage pricing overtakes flat pricing once congestion is heavy enough.
    m = LocalMarket(100, elasticity=5.0, congestion_coeff=20 * math.log(6) / 100)
    (_, ratio), = congestion_ratio_sweep(m, [m.congestion_coeff], 1e-4)
    assert ratio > 1
