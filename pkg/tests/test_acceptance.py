"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Each criterion runs at its stated tolerance and runtime budget.
"""

import contextlib
import io
import math
import time

import numpy as np
import pytest

from wifipricing import certify, cli, competition, congestion, duopoly, entry, monopoly, oracle
from wifipricing.market import LocalMarket

LN2 = math.log(2)


@pytest.fixture
def report(capsys):
    """Print one status line for the criterion outside pytest's capture."""

    def emit(number, ok, detail, elapsed, budget=None):
        timing = f"{elapsed:.2f}s" + (f" (budget {budget:g}s)" if budget else "")
        with capsys.disabled():
            print(f"\n[acceptance] criterion {number:>2}: {'PASS' if ok else 'FAIL'} | {detail} | {timing}")

    return emit


def _within_budget(start, budget):
    elapsed = time.perf_counter() - start
    return elapsed, elapsed < budget


def test_criterion_01_monopoly_closed_forms(report):
    start = time.perf_counter()
    worst_price, worst_rev = 0.0, 0.0
    for k in (0.5, 1.0, 2.0, 5.0):
        m = LocalMarket(1000, elasticity=k)
        p, _ = monopoly.search_usage_price(m, 1e-5)
        fee, _ = monopoly.search_flat_fee(m, 1e-5)
        usage, flat = monopoly.optimal_usage_pricing(m), monopoly.optimal_flat_pricing(m)
        worst_price = max(worst_price, abs(p - usage.price), abs(fee - flat.price))
        sim_u = oracle.simulate_revenue(oracle.UsagePricing(usage.price), m, 10**5).revenue["local"]
        sim_f = oracle.simulate_revenue(oracle.FlatPricing(flat.price), m, 10**5).revenue["local"]
        worst_rev = max(worst_rev, abs(sim_u / usage.revenue - 1), abs(sim_f / flat.revenue - 1))
    elapsed, fast = _within_budget(start, 5)
    ok = worst_price <= 2e-5 and worst_rev <= 1e-3 and fast
    report(1, ok, f"max price error {worst_price:.2e} (tol 2e-5), max oracle rel error {worst_rev:.2e} (tol 1e-3)", elapsed, 5)
    assert ok


def test_criterion_02_flat_beats_usage(report):
    start = time.perf_counter()
    r = monopoly.revenue_ratio(np.logspace(-4, 3, 200))
    limit = monopoly.revenue_ratio(1e-6) - 1
    elapsed, fast = _within_budget(start, 1)
    ok = bool(np.all(r > 1) and np.all(np.diff(r) > 0) and limit < 1e-5 and fast)
    report(2, ok, f"min r {r.min():.6f}, min increment {np.diff(r).min():.2e}, r(1e-6)-1 = {limit:.2e}", elapsed, 1)
    assert ok


def test_criterion_03_congestion_ratio(report):
    start = time.perf_counter()
    market = LocalMarket(100)
    c_grid = np.linspace(0.0, 10 * LN2 / market.n_users, 50)
    rows = congestion.congestion_ratio_sweep(market, c_grid, 1e-4)
    ratios = np.array([r for _, r in rows])
    elapsed, fast = _within_budget(start, 30)
    at_zero = abs(ratios[0] - 2 / (3 * LN2))
    # Relative slack of 1e-9 absorbs threshold-bisection noise once the ratio plateaus.
    nondecreasing = bool(np.all(ratios[1:] >= ratios[:-1] * (1 - 1e-9)))
    crosses = bool(np.any(ratios > 1))
    ok = at_zero <= 1e-3 and nondecreasing and crosses and fast
    report(
        3, ok,
        f"ratio(c=0) error {at_zero:.2e}, nondecreasing={nondecreasing}, "
        f"max ratio {ratios.max():.12f} (needs > 1 before cN/ln2 = 10)",
        elapsed, 30,
    )
    assert ok


def test_criterion_04_partition_threshold(report):
    start = time.perf_counter()
    at_half = abs(entry.medium_partition_threshold(0.5) - 0.5)
    p = np.linspace(entry.LOW_BOUNDARY, entry.HIGH_BOUNDARY, 101)[1:]
    decreasing = bool(np.all(np.diff(entry.medium_partition_threshold(p)) < 0))
    sim = oracle.simulate_revenue(oracle.EntryPricing(0.4, 0.0), LocalMarket(1000), 10**5)
    expected = 1000 * (entry.medium_partition_threshold(0.4) - 0.5)
    rel = abs(sim.extra["switchers"] / expected - 1)
    elapsed, fast = _within_budget(start, 5)
    ok = at_half <= 1e-10 and decreasing and rel <= 1e-3 and fast
    report(4, ok, f"|theta(1/2)-1/2| {at_half:.1e}, strictly decreasing={decreasing}, switcher rel error {rel:.2e}", elapsed, 5)
    assert ok


def test_criterion_05_optimal_eta(report):
    start = time.perf_counter()
    eta = np.linspace(0.0, 1.0, 10**6 + 1)
    prices = np.linspace(entry.LOW_BOUNDARY, entry.HIGH_BOUNDARY, 12)[1:-1]
    thetas = entry.medium_partition_threshold(prices)
    worst, lowest = 0.0, 1.0
    for n in np.linspace(100, 2000, 20):
        for t in np.linspace(0, 1900, 20):
            sc = entry.EntryScenario.from_counts(n, t)
            for p, theta in zip(prices, thetas):
                gross = n * (theta - p) ** 2 / 2 + t * (p - 1.5 * p * p)
                loss = LN2 / 2 * n * (theta - 0.5)
                # Nash product divided by the positive constant gross^2.
                product = (1.0 - eta) * (eta - loss / gross)
                best = eta[np.argmax(product)]
                closed = entry.optimal_eta(p, sc)
                worst = max(worst, abs(best - closed))
                lowest = min(lowest, closed)
    elapsed, fast = _within_budget(start, 60)
    ok = worst <= 2e-6 and lowest > 0.5 and fast
    report(5, ok, f"max |eta grid - eta closed| {worst:.2e} (tol 2e-6), min eta {lowest:.6f}", elapsed, 60)
    assert ok


def test_criterion_06_bargain_trends(report):
    start = time.perf_counter()
    base = entry.bargain(entry.EntryScenario.from_counts(1000, 400))
    invariant = all(
        abs(o.p_glob - base.p_glob) <= 1e-5 and abs(o.eta - base.eta) <= 1e-5
        for o in (entry.bargain(entry.EntryScenario.from_counts(1000, 400, g)) for g in (0.25, 0.5))
    )
    outcomes, failures = [], []
    for t in range(0, 1201, 200):
        try:
            outcomes.append(entry.bargain(entry.EntryScenario.from_counts(1000, t)))
        except entry.NoAgreement as exc:
            failures.append(f"T={t}: {exc}")
            outcomes.append(None)
    found = [o for o in outcomes if o is not None]
    p = [o.p_glob for o in found]
    eta = [o.eta for o in found]
    monotone = not failures and bool(np.all(np.diff(p) < 0) and np.all(np.diff(eta) < 0))
    win_win = not failures and all(o.win_win for o in found)
    elapsed, fast = _within_budget(start, 60)
    ok = invariant and monotone and win_win and fast
    detail = f"G-invariant={invariant}, decreasing in T={monotone}, win-win={win_win}"
    if failures:
        detail += "; " + "; ".join(failures)
    report(6, ok, detail, elapsed, 60)
    assert ok


def test_criterion_07_regime_ratio(report):
    start = time.perf_counter()
    a = entry.regime_product_ratio(entry.EntryScenario.from_counts(1000, 400))
    b = entry.regime_product_ratio(entry.EntryScenario.from_counts(350, 1000))
    elapsed, fast = _within_budget(start, 10)
    ok = a < 1 < b and fast
    report(7, ok, f"ratio(1000, 400) = {a:.4f} (< 1), ratio(350, 1000) = {b:.4f} (> 1)", elapsed, 10)
    assert ok


def test_criterion_08_duopoly(report):
    start = time.perf_counter()
    rng = np.random.default_rng(20240)
    n = 1000
    market = LocalMarket(n)
    worst_iter, chain, certified, shares = 0.0, True, True, True
    for _ in range(10):
        g1 = rng.uniform(0.2, 1.0)
        g2 = g1 * rng.uniform(0.1, 0.9)
        eq = duopoly.asymmetric_equilibrium(g1, g2, market)
        p1, p2 = duopoly.iterate_best_responses(g1, g2, rng.uniform(0, 0.5), rng.uniform(0, 0.5), 60)
        worst_iter = max(worst_iter, abs(p1 - eq.p1), abs(p2 - eq.p2))
        chain &= 0 < eq.t_low < eq.t_mid < eq.t_switch < 1
        certified &= duopoly.verify_equilibrium(eq, g1, g2, market, eps=1e-6 * n)
        s1, s2 = eq.shares()
        shares &= s1 + s2 > 0.75 and s1 > 0.5
    elapsed, fast = _within_budget(start, 30)
    ok = worst_iter <= 1e-8 and chain and certified and shares and fast
    report(8, ok, f"max iteration error {worst_iter:.1e}, strict chain={chain}, certified={certified}, shares={shares}", elapsed, 30)
    assert ok


def test_criterion_09_competition(report):
    start = time.perf_counter()
    step = 1e-5
    sc0 = entry.EntryScenario.from_counts(1000, 400)
    shares = competition.group_bargain(sc0, 2, step).eta == 1 / 3 and all(
        competition.group_bargain(sc0, m, step).eta == 1 / (m + 1) for m in (3, 4, 5)
    )
    worst, in_range, below = 0.0, True, True
    for n in (250, 500, 1000, 1500, 2000):
        for t in (100, 400, 800, 1200, 2000):
            sc = entry.EntryScenario.from_counts(n, t)
            out = competition.group_bargain(sc, 2, step)
            worst = max(worst, abs(out.p_glob - competition.competition_price_closed_form(sc)))
            in_range &= 0 <= out.p_glob <= entry.LOW_BOUNDARY
            below &= out.p_glob < entry.bargain(sc, step).p_glob
    elapsed, fast = _within_budget(start, 30)
    ok = shares and worst <= 2 * step and in_range and below and fast
    report(9, ok, f"shares exact={shares}, max price error {worst:.2e} (tol {2 * step:g}), in low regime={in_range}, below monopoly={below}", elapsed, 30)
    assert ok


def test_criterion_10_monopoly_vs_competition(report):
    start = time.perf_counter()

    def crossing(t):
        for n in range(100, 1501, 10):
            mono, comp = competition.monopoly_vs_competition(entry.EntryScenario.from_counts(n, t, 0.6))
            if comp > mono:
                return n
        return None

    n400, n600 = crossing(400), crossing(600)
    elapsed, fast = _within_budget(start, 60)
    ok = n400 is not None and 400 <= n400 <= 600 and n600 is not None and 600 <= n600 <= 800 and fast
    report(10, ok, f"crossing N = {n400} for T=400 (range 400-600), N = {n600} for T=600 (range 600-800)", elapsed, 60)
    assert ok


def test_criterion_11_oracle_convergence(report):
    start = time.perf_counter()
    errors = certify.convergence_errors((10**3, 10**4, 10**5))
    factors = [errors[0] / errors[1], errors[1] / errors[2]]
    elapsed, fast = _within_budget(start, 20)
    ok = min(factors) >= 8 and fast
    report(11, ok, f"errors {', '.join(f'{e:.2e}' for e in errors)}; shrink factors {factors[0]:.1f}, {factors[1]:.1f} (need >= 8)", elapsed, 20)
    assert ok


def _sweep_csv(*extra):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(["sweep", "--figure", "fig6", *extra])
    assert code == 0
    return buf.getvalue()


def test_criterion_12_deterministic_sweep(report):
    start = time.perf_counter()
    runs = [_sweep_csv(), _sweep_csv(), _sweep_csv("--workers", "2"), _sweep_csv("--workers", "4")]
    elapsed = time.perf_counter() - start
    ok = all(r.encode() == runs[0].encode() for r in runs)
    report(12, ok, f"{len(runs)} runs (workers 1, 1, 2, 4) byte-identical={ok}, {len(runs[0])} bytes", elapsed)
    assert ok
