"""Market primitives: local/global markets and per-user demand and payoffs.

User types ``theta`` are uniform on [0, 1]. Prices, fees and revenues are in
normalized units consistent with that valuation scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class LocalMarket:
    """One local WiFi market served by a local provider.

    Attributes:
        n_users: number of local users N.
        coverage: WiFi coverage fraction G in (0, 1].
        elasticity: demand elasticity k > 0 in ``theta * ln(1 + k d)``.
        congestion_coeff: congestion cost c per unit of aggregate demand.
    """

    n_users: float
    coverage: float = 1.0
    elasticity: float = 1.0
    congestion_coeff: float = 0.0

    def __post_init__(self):
        if not self.n_users >= 1:
            raise ValueError(f"n_users must be >= 1, got {self.n_users}")
        if not 0 < self.coverage <= 1:
            raise ValueError(f"coverage must lie in (0, 1], got {self.coverage}")
        if not self.elasticity > 0:
            raise ValueError(f"elasticity must be positive, got {self.elasticity}")
        if not self.congestion_coeff >= 0:
            raise ValueError(
                f"congestion_coeff must be nonnegative, got {self.congestion_coeff}"
            )


@dataclass(frozen=True)
class GlobalMarket:
    """A set of local markets linked by travel.

    ``travel_fractions[j, i]`` is the fraction of market j's users that visit
    market i. The diagonal is ignored.
    """

    markets: tuple[LocalMarket, ...]
    travel_fractions: np.ndarray = field(repr=False)

    def __post_init__(self):
        markets = tuple(self.markets)
        alpha = np.asarray(self.travel_fractions, dtype=float)
        n = len(markets)
        if alpha.shape != (n, n):
            raise ValueError(
                f"travel_fractions must be {n}x{n}, got shape {alpha.shape}"
            )
        if np.any(alpha < 0) or np.any(alpha > 1):
            raise ValueError("travel_fractions entries must lie in [0, 1]")
        alpha = alpha.copy()
        alpha.setflags(write=False)
        object.__setattr__(self, "markets", markets)
        object.__setattr__(self, "travel_fractions", alpha)

    @classmethod
    def from_lists(
        cls, markets: Sequence[LocalMarket], travel_fractions: Sequence[Sequence[float]]
    ) -> "GlobalMarket":
        return cls(tuple(markets), np.asarray(travel_fractions, dtype=float))


def _check_unit(name: str, value: float) -> None:
    if not 0 <= value <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


def utility(theta: float, d: float, k: float) -> float:
    """Logarithmic utility ``theta * ln(1 + k d)`` of usage level ``d``."""
    _check_unit("theta", theta)
    _check_unit("d", d)
    return theta * np.log1p(k * d)


def payoff_usage(theta: float, p: float, d: float, market: LocalMarket) -> float:
    """Payoff of a type-``theta`` user demanding ``d`` at usage price ``p``.

    Utility and payment both accrue only inside coverage, so the payoff scales
    with G. It may be negative.
    """
    if p < 0:
        raise ValueError(f"usage price must be nonnegative, got {p}")
    return market.coverage * (utility(theta, d, market.elasticity) - p * d)


def optimal_demand(theta, p, k):
    """Payoff-maximizing usage level ``clip(theta/p - 1/k, 0, 1)``.

    Accepts scalars or arrays for ``theta`` and ``p``. Free service (p = 0) is
    rejected; callers handle that corner themselves.
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr <= 0):
        raise ValueError("optimal_demand requires a positive usage price")
    d = np.clip(np.asarray(theta, dtype=float) / p_arr - 1.0 / k, 0.0, 1.0)
    return float(d) if d.ndim == 0 else d


def price_threshold(k: float) -> float:
    """Usage price ``k/(k+1)`` above which no user demands full usage."""
    if not k > 0:
        raise ValueError(f"elasticity must be positive, got {k}")
    return k / (k + 1.0)


def payoff_flat(theta: float, fee: float, market: LocalMarket) -> float:
    """Payoff ``G theta ln(1+k) - P`` of a flat-rate subscriber (full usage)."""
    _check_unit("theta", theta)
    if fee < 0:
        raise ValueError(f"flat fee must be nonnegative, got {fee}")
    return market.coverage * theta * np.log1p(market.elasticity) - fee


def traveler_count(gm: GlobalMarket, i: int) -> float:
    """Aggregate travelers ``sum_{j != i} alpha[j, i] * N_j`` visiting market i."""
    n = len(gm.markets)
    if not 0 <= i < n:
        raise IndexError(f"market index {i} out of range for {n} markets")
    sizes = np.array([m.n_users for m in gm.markets], dtype=float)
    inflow = gm.travel_fractions[:, i] * sizes
    return float(inflow.sum() - inflow[i])
