"""Brute-force checker: a market of finitely many equal-mass users.

The type interval [0, 1] is cut into ``U`` equal cells and one agent sits at
each midpoint. Every agent evaluates the payoff of every option it has and
takes the best one. Revenues and demand are mass-weighted sums over agents.
Nothing here reuses the closed forms it is meant to check, only the user-level
payoff primitives.

Payoff ties go to the highest-priority option (none < global < local <
provider 2 < provider 1), except ties between the two duopoly providers, which
split the agent's mass in half.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .congestion import ConvergenceError
from .market import LocalMarket

LN2 = float(np.log(2.0))
FIXED_POINT_TOL = 1e-8
FIXED_POINT_MAXITER = 500


class AgentChoice(enum.IntEnum):
    """Options an agent can pick; the integer value is the tie-break priority."""

    NONE = 0
    GLOBAL = 1
    LOCAL = 2
    PROVIDER2 = 3
    PROVIDER1 = 4


@dataclass(frozen=True)
class DiscretizedMarket:
    u_cells: int = 100_000
    n_users: float = 1.0

    def __post_init__(self):
        if self.u_cells < 1:
            raise ValueError(f"u_cells must be positive, got {self.u_cells}")

    @functools.cached_property
    def theta_points(self) -> np.ndarray:
        return (np.arange(self.u_cells) + 0.5) / self.u_cells

    @property
    def mass_per_cell(self) -> float:
        return self.n_users / self.u_cells


# Pricing configurations understood by simulate_revenue.


@dataclass(frozen=True)
class UsagePricing:
    """Monopoly usage price; congestion applies if the market has ``c > 0``."""

    p: float


@dataclass(frozen=True)
class FlatPricing:
    """Monopoly flat fee; congestion applies if the market has ``c > 0``."""

    fee: float


@dataclass(frozen=True)
class DuopolyPricing:
    p1: float
    p2: float
    g1: float
    g2: float


@dataclass(frozen=True)
class EntryPricing:
    """Local monopolist at flat ``fee`` next to a global usage price.

    ``fee=None`` means the local provider keeps its monopoly fee ``G ln2/2``.
    """

    p_glob: float
    travelers: float = 0.0
    fee: float | None = None


@dataclass(frozen=True)
class CompetitionEntryPricing:
    """Global usage price facing ``m`` zero-price local providers of coverage ``G/m``."""

    p_glob: float
    travelers: float = 0.0
    m_providers: int = 2


class Option(NamedTuple):
    choice: AgentChoice
    owner: str | None
    payoff: np.ndarray
    demand: np.ndarray  # usage level d in [0, 1]
    payment: np.ndarray  # money paid to the owner per unit mass
    congested: bool = False


@dataclass
class Population:
    theta: np.ndarray
    mass_per_cell: float
    options: list[Option]


@dataclass
class SimulationResult:
    revenue: dict[str, float]
    usage: dict[str, float]
    mass: dict[str, float]
    congestion: float = 0.0
    choices: np.ndarray = field(default=None, repr=False)
    weights: np.ndarray = field(default=None, repr=False)
    extra: dict[str, float] = field(default_factory=dict)


def _usage_option(theta, p, coverage, k, owner, choice, congestion=0.0, congested=False):
    if p > 0:
        d = np.clip(theta / p - 1.0 / k, 0.0, 1.0)
    else:
        d = (theta > 0).astype(float)
    payoff = coverage * (theta * np.log1p(k * d) - p * d - congestion)
    return Option(choice, owner, payoff, d, coverage * p * d, congested)


def _flat_option(theta, fee, coverage, k, owner, choice, congestion=0.0, congested=False):
    payoff = coverage * (theta * np.log1p(k) - congestion) - fee
    ones = np.ones_like(theta)
    return Option(choice, owner, payoff, ones, fee * ones, congested)


def _none_option(theta):
    zero = np.zeros_like(theta)
    return Option(AgentChoice.NONE, None, zero, zero, zero)


def decide(options: Sequence[Option]) -> tuple[np.ndarray, np.ndarray]:
    """Per-agent choice codes and option weights (rows sum to 1)."""
    payoffs = np.stack([o.payoff for o in options], axis=1)
    codes = np.array([int(o.choice) for o in options])
    best = payoffs.max(axis=1, keepdims=True)
    tied = payoffs == best
    ranked = np.where(tied, codes[None, :], -1)
    pick = ranked.argmax(axis=1)
    weights = np.zeros_like(payoffs)
    weights[np.arange(len(pick)), pick] = 1.0
    providers = [j for j, o in enumerate(options) if o.choice in (AgentChoice.PROVIDER1, AgentChoice.PROVIDER2)]
    if len(providers) == 2:
        j1, j2 = providers
        split = tied[:, j1] & tied[:, j2]
        weights[split, :] = 0.0
        weights[split, j1] = 0.5
        weights[split, j2] = 0.5
    return codes[pick], weights


def _aggregate(populations: Sequence[Population]):
    revenue: dict[str, float] = {}
    usage: dict[str, float] = {}
    mass = {c.name.lower(): 0.0 for c in AgentChoice}
    congested_demand = 0.0
    decisions = []
    for pop in populations:
        choices, weights = decide(pop.options)
        decisions.append((choices, weights))
        for j, opt in enumerate(pop.options):
            w = weights[:, j]
            m = float(np.sum(w)) * pop.mass_per_cell
            mass[opt.choice.name.lower()] += m
            if opt.owner is None:
                continue
            revenue[opt.owner] = revenue.get(opt.owner, 0.0) + float(np.sum(w * opt.payment)) * pop.mass_per_cell
            usage[opt.owner] = usage.get(opt.owner, 0.0) + float(np.sum(w * opt.demand)) * pop.mass_per_cell
            if opt.congested:
                congested_demand += float(np.sum(w * opt.demand)) / len(pop.theta)
    return revenue, usage, mass, congested_demand, decisions


def _populations(config, market: LocalMarket, disc: DiscretizedMarket, congestion: float):
    theta = disc.theta_points
    g, k = market.coverage, market.elasticity
    mpc = disc.mass_per_cell
    if isinstance(config, UsagePricing):
        opts = [_none_option(theta), _usage_option(theta, config.p, g, k, "local", AgentChoice.LOCAL, congestion, True)]
        return [Population(theta, mpc, opts)]
    if isinstance(config, FlatPricing):
        opts = [_none_option(theta), _flat_option(theta, config.fee, g, k, "local", AgentChoice.LOCAL, congestion, True)]
        return [Population(theta, mpc, opts)]
    if isinstance(config, DuopolyPricing):
        opts = [
            _none_option(theta),
            _flat_option(theta, config.p2, config.g2, 1.0, "provider2", AgentChoice.PROVIDER2),
            _flat_option(theta, config.p1, config.g1, 1.0, "provider1", AgentChoice.PROVIDER1),
        ]
        return [Population(theta, mpc, opts)]
    if isinstance(config, EntryPricing):
        fee = g * LN2 / 2.0 if config.fee is None else config.fee
        locals_ = [
            _none_option(theta),
            _usage_option(theta, config.p_glob, g, 1.0, "global", AgentChoice.GLOBAL),
            _flat_option(theta, fee, g, 1.0, "local", AgentChoice.LOCAL),
        ]
        pops = [Population(theta, mpc, locals_)]
        if config.travelers > 0:
            travel = [_none_option(theta), _usage_option(theta, config.p_glob, g, 1.0, "global", AgentChoice.GLOBAL)]
            pops.append(Population(theta, config.travelers / disc.u_cells, travel))
        return pops
    if isinstance(config, CompetitionEntryPricing):
        m = config.m_providers
        locals_ = [
            _usage_option(theta, config.p_glob, g, 1.0, "global", AgentChoice.GLOBAL),
            _flat_option(theta, 0.0, g / m, 1.0, "locals", AgentChoice.LOCAL),
        ]
        pops = [Population(theta, mpc, locals_)]
        if config.travelers > 0:
            travel = [_none_option(theta), _usage_option(theta, config.p_glob, g, 1.0, "global", AgentChoice.GLOBAL)]
            pops.append(Population(theta, config.travelers / disc.u_cells, travel))
        return pops
    raise TypeError(f"unsupported pricing configuration: {config!r}")


def _solve_congestion(config, market: LocalMarket, disc: DiscretizedMarket) -> float:
    """Congestion level ``X = cN D(X)`` that agents' choices reproduce.

    ``X - cN D(X)`` is increasing in ``X`` since demand only falls as the cost
    rises, so the fixed point is bracketed and bisected.
    """
    cn = market.congestion_coeff * market.n_users
    if cn == 0:
        return 0.0

    def residual(x):
        *_, demand, _ = _aggregate(_populations(config, market, disc, x))
        return x - cn * demand

    lo, hi = 0.0, cn
    if residual(lo) >= 0:
        return 0.0
    for _ in range(FIXED_POINT_MAXITER):
        if hi - lo <= FIXED_POINT_TOL:
            return hi
        mid = 0.5 * (lo + hi)
        if residual(mid) < 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError("congestion fixed point did not converge")


def simulate_revenue(config, market: LocalMarket, u_cells: int = 100_000) -> SimulationResult:
    """Let every discretized agent best-respond to ``config`` and total the outcome.

    ``revenue`` and ``usage`` are keyed by provider. ``mass`` is keyed by
    choice name. For entry configurations, ``extra["switchers"]`` is the local
    mass that moved from the local flat plan to global WiFi.
    """
    disc = DiscretizedMarket(u_cells, market.n_users)
    congestion = 0.0
    if isinstance(config, (UsagePricing, FlatPricing)):
        congestion = _solve_congestion(config, market, disc)
    pops = _populations(config, market, disc, congestion)
    revenue, usage, mass, _, decisions = _aggregate(pops)
    choices, weights = decisions[0]
    result = SimulationResult(revenue, usage, mass, congestion, choices, weights)
    if isinstance(config, EntryPricing):
        local_payoff = pops[0].options[2].payoff
        stayed_before = local_payoff >= 0
        moved = (choices == AgentChoice.GLOBAL) & stayed_before
        result.extra["switchers"] = float(np.sum(moved)) * disc.mass_per_cell
        result.extra["pre_entry_local_revenue"] = float(
            np.sum(stayed_before) * disc.mass_per_cell * (pops[0].options[2].payment[0])
        )
    if isinstance(config, CompetitionEntryPricing):
        glob = choices == AgentChoice.GLOBAL
        theta = disc.theta_points
        result.extra["switch_threshold"] = float(theta[glob].min() - 0.5 / u_cells) if glob.any() else 1.0
    return result


def grid_best_response(make_config, actor: str, market: LocalMarket, prices, u_cells: int = 100_000) -> float:
    """Revenue-maximizing price for ``actor`` with everyone else held fixed.

    ``make_config(price)`` builds the full configuration for a candidate
    price. Ties go to the lowest price.
    """
    prices = np.asarray(prices, dtype=float)
    if prices.size == 0:
        raise ValueError("price grid must be nonempty")
    revs = [simulate_revenue(make_config(p), market, u_cells).revenue.get(actor, 0.0) for p in prices]
    return float(prices[int(np.argmax(revs))])


def duopoly_deviation_revenues(
    actor: int, rival_price: float, prices, g1: float, g2: float, disc: DiscretizedMarket
) -> np.ndarray:
    """Revenue of duopoly provider ``actor`` at each candidate price, rival fixed.

    Same agent decisions as ``simulate_revenue`` on a ``DuopolyPricing``
    configuration, evaluated for many prices at once. Each agent's best
    alternative to the actor is computed once, so the agent joins the actor
    exactly when its surplus ``theta G ln2 - alternative`` beats the price.
    """
    theta = disc.theta_points
    own_g, rival_g = (g1, g2) if actor == 1 else (g2, g1)
    rival = theta * rival_g * LN2 - rival_price
    rival_wins_ties_with_none = rival >= 0
    alternative = np.maximum(rival, 0.0)
    surplus = theta * own_g * LN2 - alternative
    # Equal payoffs against the rival split the agent; against "none" the
    # provider wins.
    vs_rival = np.sort(surplus[rival_wins_ties_with_none])
    vs_none = np.sort(surplus[~rival_wins_ties_with_none])
    prices = np.asarray(prices, dtype=float)

    def counts(sorted_surplus):
        right = np.searchsorted(sorted_surplus, prices, side="right")
        left = np.searchsorted(sorted_surplus, prices, side="left")
        return len(sorted_surplus) - right, right - left

    above_r, equal_r = counts(vs_rival)
    above_n, equal_n = counts(vs_none)
    agents = above_r + 0.5 * equal_r + above_n + equal_n
    return prices * agents * disc.mass_per_cell


def entry_stage2_revenues(prices, scenario, u_cells: int = 100_000):
    """Global gross revenue and local revenue loss at each global price (monopoly market)."""
    market = scenario.market
    gross, loss = [], []
    for p in np.asarray(prices, dtype=float):
        res = simulate_revenue(EntryPricing(float(p), scenario.travelers), market, u_cells)
        gross.append(res.revenue.get("global", 0.0))
        loss.append(res.extra["pre_entry_local_revenue"] - res.revenue.get("local", 0.0))
    return np.array(gross), np.array(loss)


def grid_bargain(
    scenario,
    eta_grid,
    price_grid,
    kind: str = "monopoly",
    m_providers: int = 2,
    u_cells: int = 100_000,
) -> tuple[float, float, float]:
    """Exhaustive 2-D search of the Nash product over ``eta x price``.

    ``kind="monopoly"`` bargains with one local monopolist who loses
    subscribers; ``kind="competition"`` bargains with ``m_providers``
    zero-revenue local providers, each receiving share ``eta``. Stage II is
    simulated by the agents once per price. Returns ``(eta, price, product)``.
    """
    eta = np.asarray(eta_grid, dtype=float)[None, :]
    prices = np.asarray(price_grid, dtype=float)
    if eta.size == 0 or prices.size == 0:
        raise ValueError("grids must be nonempty")
    if kind == "monopoly":
        gross, loss = entry_stage2_revenues(prices, scenario, u_cells)
        gross, loss = gross[:, None], loss[:, None]
        product = (1.0 - eta) * gross * (eta * gross - loss)
        product = np.where((1.0 - eta) * gross > 0, product, -np.inf)
    elif kind == "competition":
        gross = np.array([
            simulate_revenue(
                CompetitionEntryPricing(float(p), scenario.travelers, m_providers), scenario.market, u_cells
            ).revenue.get("global", 0.0)
            for p in prices
        ])[:, None]
        keep = 1.0 - m_providers * eta
        product = np.where(keep >= 0, keep * gross * (eta * gross) ** m_providers, -np.inf)
    else:
        raise ValueError(f"unknown bargaining kind {kind!r}")
    i, j = np.unravel_index(int(np.argmax(product)), product.shape)
    return float(eta[0, j]), float(prices[i]), float(product[i, j])
