"""Monopoly pricing when subscribers share a congestion cost.

Each subscriber pays a congestion cost ``c N D`` where ``D`` is the aggregate
demand of all subscribers per unit population. Subscribers are non-atomic, so
the cost does not change anyone's own demand; it only raises the lowest
subscribing type.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .market import LocalMarket
from .monopoly import Scheme, grid_search

BISECTION_TOL = 1e-10
BISECTION_MAXITER = 200


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class CongestedOutcome:
    scheme: Scheme
    price: float
    revenue: float
    theta_threshold: float


class CongestionThreshold(NamedTuple):
    theta: float
    empty_market: bool


def aggregate_demand(theta_th, p, k):
    """Exact integral of the optimal demand over types in ``[theta_th, 1]``.

    The integrand is zero below ``p/k``, linear ``theta/p - 1/k`` up to
    ``p(1+k)/k`` and one above it.
    """
    theta_th = np.asarray(theta_th, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0):
        raise ValueError("usage price must be positive")
    lo = p / k
    hi = np.minimum(p * (1.0 + k) / k, 1.0)
    a = np.clip(theta_th, lo, np.maximum(hi, lo))
    partial = np.where(hi > a, (hi**2 - a**2) / (2.0 * p) - (hi - a) / k, 0.0)
    full = np.maximum(1.0 - np.maximum(theta_th, p * (1.0 + k) / k), 0.0)
    out = partial + full
    return float(out) if out.ndim == 0 else out


def _indifference(theta, p, k, cn):
    """Normalized payoff of the marginal subscriber ``theta`` (zero at the threshold)."""
    d = np.clip(theta / p - 1.0 / k, 0.0, 1.0)
    return theta * np.log1p(k * d) - p * d - cn * aggregate_demand(theta, p, k)


def _threshold_array(p, k: float, cn: float) -> np.ndarray:
    # v is increasing in theta on [p/k, 1]; bisect all prices at once.
    p = np.atleast_1d(np.asarray(p, dtype=float))
    lo = np.minimum(p / k, 1.0)
    hi = np.ones_like(p)
    v_lo = _indifference(lo, p, k, cn)
    v_hi = _indifference(hi, p, k, cn)
    a, b = lo.copy(), hi.copy()
    for _ in range(BISECTION_MAXITER):
        if np.all(b - a <= BISECTION_TOL):
            break
        mid = 0.5 * (a + b)
        below = _indifference(mid, p, k, cn) < 0
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
    else:
        raise ConvergenceError("threshold bisection did not converge")
    theta = 0.5 * (a + b)
    theta = np.where(v_lo >= 0, lo, theta)
    return np.where(v_hi < 0, 1.0, theta)


def congested_usage_threshold(p: float, market: LocalMarket) -> CongestionThreshold:
    """Lowest subscribing type at usage price ``p`` under congestion.

    Equals ``p/k`` without congestion. If even the top type would opt out, the
    market is empty and the threshold is 1.
    """
    if not p > 0:
        raise ValueError(f"usage price must be positive, got {p}")
    k = market.elasticity
    cn = market.congestion_coeff * market.n_users
    theta = float(_threshold_array(p, k, cn)[0])
    empty = bool(p >= k or _indifference(1.0, p, k, cn) < 0)
    return CongestionThreshold(1.0 if empty else theta, empty)


def congested_usage_revenue(p, market: LocalMarket):
    k = market.elasticity
    cn = market.congestion_coeff * market.n_users
    p_arr = np.asarray(p, dtype=float)
    theta = _threshold_array(p_arr, k, cn).reshape(p_arr.shape)
    rev = p_arr * market.n_users * market.coverage * aggregate_demand(theta, p_arr, k)
    return float(rev) if rev.ndim == 0 else rev


def optimal_congested_usage(market: LocalMarket, grid_step: float = 1e-4) -> CongestedOutcome:
    """Exhaustive search of the usage price over (0, k)."""
    k = market.elasticity
    price, revenue = grid_search(
        lambda p: congested_usage_revenue(p, market), grid_step, k - grid_step, grid_step
    )
    return CongestedOutcome(
        scheme=Scheme.USAGE_BASED,
        price=price,
        revenue=revenue,
        theta_threshold=congested_usage_threshold(price, market).theta,
    )


def congested_flat_threshold(fee: float, market: LocalMarket) -> float:
    log_term = np.log1p(market.elasticity)
    cn = market.congestion_coeff * market.n_users
    return (fee / market.coverage + cn) / (log_term + cn)


def congested_flat_revenue(fee, market: LocalMarket):
    fee = np.asarray(fee, dtype=float)
    share = np.maximum(0.0, 1.0 - congested_flat_threshold(fee, market))
    rev = fee * market.n_users * share
    return float(rev) if rev.ndim == 0 else rev


def optimal_congested_flat(market: LocalMarket) -> CongestedOutcome:
    """Closed-form flat-rate optimum; the fee does not depend on congestion."""
    log_term = np.log1p(market.elasticity)
    cn = market.congestion_coeff * market.n_users
    fee = market.coverage * log_term / 2.0
    return CongestedOutcome(
        scheme=Scheme.FLAT_RATE,
        price=fee,
        revenue=market.n_users * market.coverage * log_term / (4.0 * (1.0 + cn / log_term)),
        theta_threshold=congested_flat_threshold(fee, market),
    )


def congestion_ratio_sweep(
    market: LocalMarket, c_grid: Sequence[float], grid_step: float = 1e-4
) -> list[tuple[float, float]]:
    """Usage-over-flat optimal revenue ratio for each congestion coefficient."""
    if len(c_grid) == 0:
        raise ValueError("c_grid must be nonempty")
    rows = []
    for c in c_grid:
        m = dataclasses.replace(market, congestion_coeff=float(c))
        usage = optimal_congested_usage(m, grid_step)
        flat = optimal_congested_flat(m)
        rows.append((float(c), usage.revenue / flat.revenue))
    return rows
