"""Global provider entering a monopoly local market (elasticity fixed at 1).

The local provider keeps its monopoly flat fee ``G ln2 / 2``. The global
provider offers usage-based access through the local infrastructure and
bargains with the local provider over the global price and a revenue share
``eta``. Travelers only use the global service.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .market import LocalMarket, optimal_demand
from .monopoly import price_grid

LN2 = float(np.log(2.0))
LOW_BOUNDARY = LN2 / 2.0
HIGH_BOUNDARY = 0.5
PARTITION_TOL = 1e-13


class NoAgreement(RuntimeError):
    """Raised when no price gives both providers a positive revenue increase."""


class Regime(enum.Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class Service(enum.Enum):
    NONE = "none"
    GLOBAL = "global"
    LOCAL = "local"


class Stage2Choice(NamedTuple):
    service: Service
    demand: float


@dataclass(frozen=True)
class EntryScenario:
    """A local market plus the aggregate traveler count visiting it."""

    market: LocalMarket
    travelers: float = 0.0

    def __post_init__(self):
        if self.market.elasticity != 1.0:
            raise ValueError("the entry game is defined for elasticity k = 1 only")
        if not self.travelers >= 0:
            raise ValueError(f"travelers must be nonnegative, got {self.travelers}")

    @classmethod
    def from_counts(cls, n_users: float, travelers: float, coverage: float = 1.0):
        return cls(LocalMarket(n_users=n_users, coverage=coverage), travelers)

    @property
    def n_users(self) -> float:
        return self.market.n_users

    @property
    def coverage(self) -> float:
        return self.market.coverage


@dataclass(frozen=True)
class BargainOutcome:
    p_glob: float
    eta: float
    theta_th: float
    delta_pi_global: float
    delta_pi_local: float
    product: float
    regime: Regime = Regime.MEDIUM

    @property
    def win_win(self) -> bool:
        return self.delta_pi_global > 0 and self.delta_pi_local > 0


def classify_regime(p: float) -> Regime:
    if p < 0:
        raise ValueError(f"price must be nonnegative, got {p}")
    if p <= LOW_BOUNDARY:
        return Regime.LOW
    if p <= HIGH_BOUNDARY:
        return Regime.MEDIUM
    return Regime.HIGH


def partition_gap(theta, p):
    """Payoff gain of global (partial usage) over local service for type ``theta``.

    Normalized by coverage. Its root in ``theta`` is the partition threshold.
    """
    theta = np.asarray(theta, dtype=float)
    return theta * np.log(theta / p) - theta + p - (theta - 0.5) * LN2


def _partition_thresholds(p: np.ndarray) -> np.ndarray:
    # The gap decreases in theta on [1/2, 2p], positive at 1/2 and
    # nonpositive at 2p for every p in [ln2/2, 1/2].
    a = np.full_like(p, 0.5)
    b = 2.0 * p
    while np.any(b - a > PARTITION_TOL):
        mid = 0.5 * (a + b)
        pos = partition_gap(mid, p) > 0
        a = np.where(pos, mid, a)
        b = np.where(pos, b, mid)
    return 0.5 * (a + b)


def medium_partition_threshold(p):
    """Type indifferent between the global usage service and the local flat plan.

    Defined on the medium regime ``(ln2/2, 1/2]``; the lower endpoint ``ln2/2``
    is accepted as the limit, where the threshold reaches ``2p = ln2``.
    Accepts a scalar or an array.
    """
    p_arr = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(p_arr < LOW_BOUNDARY) or np.any(p_arr > HIGH_BOUNDARY):
        raise ValueError("partition threshold is only defined for ln2/2 <= p <= 1/2")
    theta = _partition_thresholds(p_arr)
    theta = np.where(p_arr == HIGH_BOUNDARY, 0.5, theta)
    return float(theta[0]) if np.ndim(p) == 0 else theta


def stage2_choice(theta: float, p: float, scenario: EntryScenario) -> Stage2Choice:
    """Service picked by a local user of type ``theta`` at global price ``p``."""
    if not 0 <= theta <= 1:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    regime = classify_regime(p)
    if regime is Regime.HIGH:
        return Stage2Choice(Service.LOCAL, 1.0) if theta >= 0.5 else Stage2Choice(Service.NONE, 0.0)
    if theta < p:
        return Stage2Choice(Service.NONE, 0.0)
    if regime is Regime.MEDIUM and theta >= medium_partition_threshold(p):
        return Stage2Choice(Service.LOCAL, 1.0)
    return Stage2Choice(Service.GLOBAL, optimal_demand(theta, p, 1.0))


def _gross_global(p, theta_th, scenario: EntryScenario):
    """Global provider's market revenue before sharing, per unit coverage."""
    local = scenario.n_users * (theta_th - p) ** 2 / 2.0
    travel = scenario.travelers * (p - 1.5 * p**2)
    return local + travel


def _local_loss(theta_th, scenario: EntryScenario):
    """Local flat-rate revenue lost to switchers, per unit coverage."""
    return (LN2 / 2.0) * scenario.n_users * (theta_th - 0.5)


def delta_pi_global(eta, p, theta_th, scenario: EntryScenario):
    return (1.0 - eta) * scenario.coverage * _gross_global(p, theta_th, scenario)


def delta_pi_local(eta, p, theta_th, scenario: EntryScenario):
    gross = _gross_global(p, theta_th, scenario)
    return scenario.coverage * (-_local_loss(theta_th, scenario) + eta * gross)


def _eta_from(loss, gross):
    a = (loss / 2.0) / gross
    return np.minimum(1.0, np.maximum(2.0 * a, a + 0.5))


def optimal_eta(p: float, scenario: EntryScenario) -> float:
    """Nash-bargained revenue share for a fixed medium-regime global price."""
    theta_th = medium_partition_threshold(p)
    gross = _gross_global(p, theta_th, scenario)
    if not gross > 0:
        raise ValueError(f"no global revenue to share at p={p}")
    return float(_eta_from(_local_loss(theta_th, scenario), gross))


@functools.lru_cache(maxsize=8)
def _medium_grid(grid_step: float) -> tuple[np.ndarray, np.ndarray]:
    prices = price_grid(LOW_BOUNDARY, HIGH_BOUNDARY, grid_step)
    thresholds = medium_partition_threshold(prices)
    prices.setflags(write=False)
    thresholds.setflags(write=False)
    return prices, thresholds


def bargain_profile(scenario: EntryScenario, grid_step: float = 1e-5):
    """Nash product along the medium-regime price grid with eta set optimally.

    Returns ``(prices, thresholds, eta, product)``; points with no revenue to
    share get a zero product and a NaN share.
    """
    prices, thresholds = _medium_grid(grid_step)
    gross = _gross_global(prices, thresholds, scenario)
    loss = _local_loss(thresholds, scenario)
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = np.where(gross > 0, _eta_from(loss, gross), np.nan)
    g = scenario.coverage
    product = np.where(gross > 0, (1 - eta) * g * gross * g * (eta * gross - loss), 0.0)
    return prices, thresholds, eta, product


def bargain(scenario: EntryScenario, grid_step: float = 1e-5) -> BargainOutcome:
    """Medium-regime Nash bargain by exhaustive search of the global price.

    The grid spans ``[ln2/2, 1/2]`` with both endpoints; ties go to the lower
    price. Raises ``NoAgreement`` if no grid price yields a positive product.
    """
    prices, thresholds, eta, product = bargain_profile(scenario, grid_step)
    i = int(np.argmax(product))
    if not product[i] > 0:
        raise NoAgreement(
            f"no win-win medium-regime price for N={scenario.n_users}, T={scenario.travelers}"
        )
    p, theta_th, e = float(prices[i]), float(thresholds[i]), float(eta[i])
    return BargainOutcome(
        p_glob=p,
        eta=e,
        theta_th=theta_th,
        delta_pi_global=float(delta_pi_global(e, p, theta_th, scenario)),
        delta_pi_local=float(delta_pi_local(e, p, theta_th, scenario)),
        product=float(product[i]),
        regime=Regime.MEDIUM,
    )


def low_regime_bargain(scenario: EntryScenario) -> BargainOutcome:
    """Bargain when the global provider takes the whole local market.

    Both increments peak at the monopoly usage price 1/3, leaving only the
    share to negotiate.
    """
    n, t, g = scenario.n_users, scenario.travelers, scenario.coverage
    p = 1.0 / 3.0
    x = n / (n + t)
    eta = min(1.0, max(1.5 * LN2 * x, 0.5 + 0.75 * LN2 * x))
    gross = (n + t) * (p - 1.5 * p * p)
    d_glob = (1.0 - eta) * g * gross
    d_local = g * (-(LN2 / 4.0) * n + eta * gross)
    return BargainOutcome(
        p_glob=p,
        eta=eta,
        theta_th=1.0,
        delta_pi_global=d_glob,
        delta_pi_local=d_local,
        product=d_glob * d_local,
        regime=Regime.LOW,
    )


def high_regime_boundary() -> float:
    """Price agreed on if bargaining were confined to the high regime."""
    return HIGH_BOUNDARY


def high_regime_deltas(eta: float, p: float, scenario: EntryScenario) -> tuple[float, float]:
    """Revenue increments for a high-regime price.

    Travelers are the only global users and the local provider keeps all of
    its subscribers, so its increment is just its share.
    """
    if not p > HIGH_BOUNDARY:
        raise ValueError(f"high regime requires p > 1/2, got {p}")
    g, t = scenario.coverage, scenario.travelers
    gross = t * g * (0.5 - p + p * p / 2.0)
    return (1.0 - eta) * gross, eta * gross


def regime_product_ratio(scenario: EntryScenario, grid_step: float = 1e-5) -> float:
    """Low-regime over medium-regime Nash product; above 1 flags a traveler-dominated market."""
    return low_regime_bargain(scenario).product / bargain(scenario, grid_step).product
