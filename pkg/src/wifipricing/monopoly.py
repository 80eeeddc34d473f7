"""Single local provider: usage-based vs flat-rate monopoly pricing."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .market import LocalMarket, price_threshold


class Scheme(enum.Enum):
    USAGE_BASED = "usage"
    FLAT_RATE = "flat"


@dataclass(frozen=True)
class MonopolyOutcome:
    scheme: Scheme
    price: float
    revenue: float
    total_usage: float
    subscriber_fraction: float


def usage_revenue(p, market: LocalMarket):
    """Revenue of a usage price ``p`` once every user picks its optimal demand.

    Below ``k/(k+1)`` some users run at full usage; above it everyone is
    partial. Prices at or above ``k`` attract nobody and earn zero. Accepts a
    scalar or an array of prices.
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr <= 0):
        raise ValueError("usage price must be positive")
    k = market.elasticity
    scale = market.n_users * market.coverage
    low = scale * (p_arr - p_arr**2 * (0.5 + 1.0 / k))
    high = scale * (0.5 - p_arr / k + p_arr**2 / (2 * k * k))
    rev = np.where(p_arr <= price_threshold(k), low, high)
    rev = np.where(p_arr >= k, 0.0, rev)
    return float(rev) if rev.ndim == 0 else rev


def optimal_usage_pricing(market: LocalMarket) -> MonopolyOutcome:
    k = market.elasticity
    p = k / (k + 2.0)
    scale = market.n_users * market.coverage
    return MonopolyOutcome(
        scheme=Scheme.USAGE_BASED,
        price=p,
        revenue=scale * k / (2.0 * (k + 2.0)),
        total_usage=scale / 2.0,
        subscriber_fraction=1.0 - p / k,
    )


def flat_threshold(fee, market: LocalMarket):
    """Lowest subscribing type ``P / (G ln(1+k))``; a value above 1 means nobody joins."""
    fee = np.asarray(fee, dtype=float)
    if np.any(fee < 0):
        raise ValueError("flat fee must be nonnegative")
    t = fee / (market.coverage * np.log1p(market.elasticity))
    return float(t) if t.ndim == 0 else t


def flat_revenue(fee, market: LocalMarket):
    share = np.maximum(0.0, 1.0 - flat_threshold(fee, market))
    rev = market.n_users * np.asarray(fee, dtype=float) * share
    return float(rev) if rev.ndim == 0 else rev


def optimal_flat_pricing(market: LocalMarket) -> MonopolyOutcome:
    log_term = np.log1p(market.elasticity)
    return MonopolyOutcome(
        scheme=Scheme.FLAT_RATE,
        price=market.coverage * log_term / 2.0,
        revenue=market.n_users * market.coverage * log_term / 4.0,
        total_usage=market.n_users * market.coverage / 2.0,
        subscriber_fraction=0.5,
    )


def revenue_ratio(k):
    """Flat-rate over usage-based optimal revenue, ``(k+2) ln(1+k) / (2k)``.

    Always above 1 and increasing in ``k``; tends to 1 as ``k -> 0``.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("elasticity must be positive")
    r = (k + 2.0) * np.log1p(k) / (2.0 * k)
    return float(r) if r.ndim == 0 else r


def price_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Equally spaced grid from ``lo`` to ``hi`` inclusive with spacing at most ``step``."""
    if not step > 0:
        raise ValueError(f"grid step must be positive, got {step}")
    if not hi > lo:
        raise ValueError(f"empty grid interval [{lo}, {hi}]")
    n = int(np.ceil((hi - lo) / step - 1e-9)) + 1
    return np.linspace(lo, hi, n)


def grid_search(objective, lo: float, hi: float, step: float) -> tuple[float, float]:
    """Exhaustive maximization of a vectorized ``objective`` on a price grid.

    Ties go to the lowest price. Returns ``(argmax, max)``.
    """
    grid = price_grid(lo, hi, step)
    values = np.asarray(objective(grid), dtype=float)
    i = int(np.argmax(values))
    return float(grid[i]), float(values[i])


def search_usage_price(market: LocalMarket, step: float = 1e-5) -> tuple[float, float]:
    """Grid-search the usage price over (0, k)."""
    k = market.elasticity
    return grid_search(lambda p: usage_revenue(p, market), step, k - step, step)


def search_flat_fee(market: LocalMarket, step: float = 1e-5) -> tuple[float, float]:
    """Grid-search the flat fee over [0, G ln(1+k)]."""
    cap = market.coverage * np.log1p(market.elasticity)
    return grid_search(lambda P: flat_revenue(P, market), 0.0, cap, step)
