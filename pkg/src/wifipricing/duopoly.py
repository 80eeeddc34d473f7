"""Flat-rate price competition between two local providers (k = 1).

Provider 1 has the larger coverage. A user subscribes to whichever provider
gives the larger payoff ``theta G_j ln2 - P_j``, or to nobody if both are
negative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .market import LocalMarket

LN2 = float(np.log(2.0))


class OrderingError(ValueError):
    """Prices outside the region where the closed-form revenues hold."""


class Pick(enum.Enum):
    NONE = "none"
    PROVIDER1 = "provider1"
    PROVIDER2 = "provider2"
    TIE = "tie"


@dataclass(frozen=True)
class DuopolyEquilibrium:
    p1: float
    p2: float
    t_low: float
    t_mid: float
    t_switch: float
    rev1: float
    rev2: float

    def shares(self) -> tuple[float, float]:
        """Population shares served by providers 1 and 2."""
        if self.p1 == 0 and self.p2 == 0:
            return 0.5, 0.5
        return 1.0 - self.t_switch, self.t_switch - self.t_low


def duopoly_user_choice(theta: float, p1: float, p2: float, g1: float, g2: float) -> Pick:
    """Best option for one user; ``Pick.TIE`` when both providers pay off equally."""
    if g1 < g2:
        raise ValueError("providers must be ordered so that g1 >= g2")
    v1 = theta * g1 * LN2 - p1
    v2 = theta * g2 * LN2 - p2
    best = max(v1, v2)
    if best < 0:
        return Pick.NONE
    if v1 == v2:
        return Pick.TIE
    return Pick.PROVIDER1 if v1 > v2 else Pick.PROVIDER2


def thresholds(p1: float, p2: float, g1: float, g2: float) -> tuple[float, float, float]:
    """``(t_low, t_mid, t_switch)``: provider 2 entry, provider 1 entry and indifference types."""
    t_low = p2 / (g2 * LN2)
    t_mid = p1 / (g1 * LN2)
    t_switch = (p1 - p2) / ((g1 - g2) * LN2) if g1 > g2 else np.inf
    return t_low, t_mid, t_switch


def duopoly_revenues(
    p1: float, p2: float, g1: float, g2: float, market: LocalMarket
) -> tuple[float, float]:
    """Closed-form revenues, valid only when ``0 <= t_low <= t_mid <= t_switch <= 1``."""
    if not g1 > g2 > 0:
        raise OrderingError("closed-form revenues need g1 > g2 > 0")
    t_low, t_mid, t_switch = thresholds(p1, p2, g1, g2)
    if not (0 <= t_low <= t_mid <= t_switch <= 1):
        raise OrderingError(
            f"threshold order violated: t_low={t_low:.6g}, t_mid={t_mid:.6g}, "
            f"t_switch={t_switch:.6g}"
        )
    n = market.n_users
    return p1 * n * (1.0 - t_switch), p2 * n * (t_switch - t_low)


def best_response_1(p2: float, g1: float, g2: float) -> float:
    if not g1 > g2:
        raise ValueError("best responses are derived for g1 > g2")
    return (g1 - g2) * LN2 / 2.0 + p2 / 2.0


def best_response_2(p1: float, g1: float, g2: float) -> float:
    if not g1 > g2:
        raise ValueError("best responses are derived for g1 > g2")
    return g2 * p1 / (2.0 * g1)


def iterate_best_responses(
    g1: float, g2: float, p1: float = 0.1, p2: float = 0.1, n_iter: int = 60
) -> tuple[float, float]:
    """Alternate best responses starting from ``(p1, p2)``."""
    for _ in range(n_iter):
        p1 = best_response_1(p2, g1, g2)
        p2 = best_response_2(p1, g1, g2)
    return p1, p2


def symmetric_equilibrium(g: float, market: LocalMarket) -> DuopolyEquilibrium:
    """Bertrand outcome for identical coverage: both prices drop to zero."""
    if not 0 < g <= 1:
        raise ValueError(f"coverage must lie in (0, 1], got {g}")
    return DuopolyEquilibrium(p1=0.0, p2=0.0, t_low=0.0, t_mid=0.0, t_switch=0.0, rev1=0.0, rev2=0.0)


def asymmetric_equilibrium(g1: float, g2: float, market: LocalMarket) -> DuopolyEquilibrium:
    if g1 == g2:
        raise ValueError("equal coverage: use symmetric_equilibrium")
    if not g1 > g2 > 0:
        raise ValueError("asymmetric equilibrium needs g1 > g2 > 0")
    denom = 4.0 * g1 - g2
    p1 = 2.0 * LN2 * g1 * (g1 - g2) / denom
    p2 = LN2 * g2 * (g1 - g2) / denom
    rev1, rev2 = duopoly_revenues(p1, p2, g1, g2, market)
    return DuopolyEquilibrium(p1, p2, *thresholds(p1, p2, g1, g2), rev1=rev1, rev2=rev2)


def solve_duopoly(g1: float, g2: float, market: LocalMarket) -> DuopolyEquilibrium:
    """Equilibrium for any coverage pair; reorders so provider 1 covers more."""
    if g1 < g2:
        g1, g2 = g2, g1
    if g1 == g2:
        return symmetric_equilibrium(g1, market)
    return asymmetric_equilibrium(g1, g2, market)


def verify_equilibrium(
    eq: DuopolyEquilibrium,
    g1: float,
    g2: float,
    market: LocalMarket,
    price_grid_step: float = 1e-4,
    eps: float | None = None,
    u_cells: int = 10**6,
) -> bool:
    """Certify that no unilateral deviation on a price grid gains more than ``eps``.

    Revenues come from the discretized-user oracle, which also covers
    deviations that break the threshold ordering. ``eps`` defaults to
    ``1e-6 N``.
    """
    from .oracle import DiscretizedMarket, duopoly_deviation_revenues

    if eps is None:
        eps = 1e-6 * market.n_users
    disc = DiscretizedMarket(u_cells, market.n_users)
    cap = (g1 + g2) * LN2
    n = int(np.ceil(cap / price_grid_step)) + 1
    grid = np.linspace(0.0, cap, n)
    for actor, own, rival in ((1, eq.p1, eq.p2), (2, eq.p2, eq.p1)):
        current = duopoly_deviation_revenues(actor, rival, np.array([own]), g1, g2, disc)[0]
        deviations = duopoly_deviation_revenues(actor, rival, grid, g1, g2, disc)
        if deviations.max() - current > eps:
            return False
    return True
