"""Oracle certification suite: every closed form checked against brute force.

Solvers are looked up through their modules at call time, so a replaced
function (for a negative control) is what gets certified.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import competition, congestion, duopoly, entry, monopoly, oracle
from .market import LocalMarket

LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class Check:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    @property
    def margin(self) -> float:
        return self.tolerance - self.error


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def convergence_errors(u_values=(10**3, 10**4, 10**5), k: float = 1.0) -> list[float]:
    """Largest oracle revenue error (per user) over interior usage prices, per ``U``."""
    market = LocalMarket(1.0, elasticity=k)
    prices = np.linspace(0.01, 0.99 * k, 97)
    exact = monopoly.usage_revenue(prices, market)
    out = []
    for u in u_values:
        sim = np.array([oracle.simulate_revenue(oracle.UsagePricing(p), market, u).revenue["local"] for p in prices])
        out.append(float(np.max(np.abs(sim - exact))))
    return out


def _monopoly_checks(n: float, u_cells: int) -> list[Check]:
    m = LocalMarket(n)
    usage = monopoly.optimal_usage_pricing(m)
    flat = monopoly.optimal_flat_pricing(m)
    sim_u = oracle.simulate_revenue(oracle.UsagePricing(usage.price), m, u_cells).revenue["local"]
    sim_f = oracle.simulate_revenue(oracle.FlatPricing(flat.price), m, u_cells).revenue["local"]
    grid = np.arange(1, 1000) * 1e-3
    br_u = oracle.grid_best_response(oracle.UsagePricing, "local", m, grid, 10**4)
    br_f = oracle.grid_best_response(oracle.FlatPricing, "local", m, grid, 10**4)
    # Flat revenue jumps by about fee/U per agent; with curvature 2/ln2 around
    # the peak that moves the argmax by up to sqrt(fee ln2 / U).
    flat_tol = float(np.sqrt(flat.price * LN2 / 10**4)) + 1e-3
    return [
        Check("monopoly usage revenue (rel)", _rel(sim_u, usage.revenue), 1e-3),
        Check("monopoly flat revenue (rel)", _rel(sim_f, flat.revenue), 1e-3),
        Check("monopoly usage price (grid)", abs(br_u - usage.price), 1e-3),
        Check("monopoly flat fee (grid)", abs(br_f - flat.price), flat_tol),
    ]


def _congestion_checks(n: float, u_cells: int) -> list[Check]:
    m = LocalMarket(n, congestion_coeff=1.0 / n)
    usage = congestion.optimal_congested_usage(m, 1e-3)
    flat = congestion.optimal_congested_flat(m)
    sim_u = oracle.simulate_revenue(oracle.UsagePricing(usage.price), m, u_cells).revenue["local"]
    sim_f = oracle.simulate_revenue(oracle.FlatPricing(flat.price), m, u_cells).revenue["local"]
    return [
        Check("congested usage revenue (rel)", _rel(sim_u, usage.revenue), 1e-3),
        Check("congested flat revenue (rel)", _rel(sim_f, flat.revenue), 1e-3),
    ]


def _entry_checks(n: float, t: float, u_cells: int) -> list[Check]:
    scenario = entry.EntryScenario.from_counts(n, t)
    theta = entry.medium_partition_threshold(0.4)
    sim = oracle.simulate_revenue(oracle.EntryPricing(0.4, t), scenario.market, u_cells)
    switchers = n * (theta - 0.5)

    deal = entry.bargain(scenario, 1e-5)
    gross, loss = oracle.entry_stage2_revenues([deal.p_glob], scenario, u_cells)
    etas = np.linspace(0.0, 1.0, 10**4 + 1)
    product = (1 - etas) * gross[0] * (etas * gross[0] - loss[0])
    eta_grid = float(etas[np.argmax(product)])
    eta_formula = entry.optimal_eta(deal.p_glob, scenario)

    prices = np.arange(0.35, 0.45, 1e-3)
    e2, p2, _ = oracle.grid_bargain(scenario, np.linspace(0, 1, 1001), prices, "monopoly", u_cells=2 * 10**4)
    return [
        Check("entry switcher mass (rel)", _rel(sim.extra["switchers"], switchers), 1e-3),
        Check("entry share vs eta grid", abs(eta_grid - eta_formula), 2e-3),
        Check("entry bargain price (2-D grid)", abs(p2 - deal.p_glob), 2e-3),
        Check("entry bargain share (2-D grid)", abs(e2 - deal.eta), 3e-3),
    ]


def _duopoly_checks(n: float, u_cells: int) -> list[Check]:
    g1, g2 = 0.6, 0.3
    m = LocalMarket(n)
    eq = duopoly.solve_duopoly(g1, g2, m)
    sim = oracle.simulate_revenue(oracle.DuopolyPricing(eq.p1, eq.p2, g1, g2), m, u_cells).revenue
    grid = np.arange(0, 2001) * 1e-4
    disc = oracle.DiscretizedMarket(u_cells, n)
    p2 = float(grid[np.argmax(oracle.duopoly_deviation_revenues(2, eq.p1, grid, g1, g2, disc))])
    certified = duopoly.verify_equilibrium(eq, g1, g2, m)
    return [
        Check("duopoly provider 1 revenue (rel)", _rel(sim["provider1"], eq.rev1), 1e-3),
        Check("duopoly provider 2 revenue (rel)", _rel(sim["provider2"], eq.rev2), 1e-3),
        Check("duopoly provider 2 best response", abs(p2 - eq.p2), 2e-4),
        Check("duopoly deviation certificate", 0.0 if certified else 1.0, 0.0),
    ]


def _competition_checks(n: float, t: float) -> list[Check]:
    scenario = entry.EntryScenario.from_counts(n, t)
    deal = competition.group_bargain(scenario, 2, 1e-5)
    prices = np.arange(0.0, LN2 / 2, 1e-3)
    e2, p2, _ = oracle.grid_bargain(scenario, np.linspace(0, 0.5, 501), prices, "competition", u_cells=2 * 10**4)
    return [
        Check("competition share (2-D grid)", abs(e2 - deal.eta), 1e-3),
        Check("competition price (2-D grid)", abs(p2 - deal.p_glob), 2e-3),
    ]


def run_checks(n: float = 1000.0, travelers: float = 400.0, u_cells: int = 10**5) -> list[Check]:
    checks = []
    checks += _monopoly_checks(n, u_cells)
    checks += _congestion_checks(n, u_cells)
    checks += _entry_checks(n, travelers, u_cells)
    checks += _duopoly_checks(n, u_cells)
    checks += _competition_checks(n, travelers)
    coarse, _, fine = convergence_errors()
    ratio = coarse / fine if fine > 0 else np.inf
    # Error must shrink at least 64x over two decades of U.
    checks.append(Check("oracle convergence U=1e3 vs 1e5 (inverse ratio)", 1.0 / ratio, 1.0 / 64))
    return checks
