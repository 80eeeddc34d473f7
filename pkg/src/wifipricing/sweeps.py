"""Parameter sweeps behind the figure data, written as deterministic CSV.

Every grid point is an independent pure computation, so points can be farmed
out to worker processes; rows are always emitted in grid order.
"""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import competition, congestion, entry, monopoly
from .market import LocalMarket

AXIS_PARAMS = ("n", "g", "k", "c", "travelers")
TARGETS = ("monopoly", "congestion", "global-entry", "competition-entry")

TARGET_COLUMNS = {
    "monopoly": ("usage_price", "usage_revenue", "flat_price", "flat_revenue", "ratio"),
    "congestion": ("usage_price", "usage_revenue", "flat_revenue", "ratio"),
    "global-entry": ("p_glob_star", "eta_star", "theta_th", "delta_pi_global", "delta_pi_local"),
    "competition-entry": ("p_glob_star", "eta", "delta_pi_global", "delta_pi_local_each"),
}


def format_number(x) -> str:
    """12 significant digits, ``.`` decimal point, no locale."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if np.isnan(x):
        return "nan"
    return format(x, ".12g")


@dataclass(frozen=True)
class AxisSpec:
    """Generic one-parameter sweep around a base configuration."""

    param: str
    lo: float
    hi: float
    steps: int
    target: str = "monopoly"
    base: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.param not in AXIS_PARAMS:
            raise ValueError(f"unknown sweep parameter {self.param!r}; choose from {AXIS_PARAMS}")
        if self.target not in TARGETS:
            raise ValueError(f"unknown sweep target {self.target!r}; choose from {TARGETS}")
        if not self.lo < self.hi:
            raise ValueError(f"sweep needs min < max, got {self.lo} >= {self.hi}")
        if self.steps < 2:
            raise ValueError(f"sweep needs at least 2 steps, got {self.steps}")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


def evaluate(target: str, params: dict, grid_step: float = 1e-5) -> dict[str, float]:
    """Equilibrium outputs of ``target`` at one parameter point.

    ``params`` holds any of ``n, g, k, c, travelers``. Outcomes with no
    agreement come back as NaN.
    """
    n = float(params.get("n", 1000.0))
    g = float(params.get("g", 1.0))
    k = float(params.get("k", 1.0))
    c = float(params.get("c", 0.0))
    t = float(params.get("travelers", 0.0))
    if target == "monopoly":
        m = LocalMarket(n, g, k)
        u, f = monopoly.optimal_usage_pricing(m), monopoly.optimal_flat_pricing(m)
        return dict(
            usage_price=u.price, usage_revenue=u.revenue, flat_price=f.price,
            flat_revenue=f.revenue, ratio=u.revenue / f.revenue,
        )
    if target == "congestion":
        m = LocalMarket(n, g, k, c)
        u = congestion.optimal_congested_usage(m, max(grid_step, 1e-4))
        f = congestion.optimal_congested_flat(m)
        return dict(usage_price=u.price, usage_revenue=u.revenue, flat_revenue=f.revenue, ratio=u.revenue / f.revenue)
    scenario = entry.EntryScenario.from_counts(n, t, g)
    if target == "global-entry":
        try:
            b = entry.bargain(scenario, grid_step)
        except entry.NoAgreement:
            return dict.fromkeys(TARGET_COLUMNS[target], float("nan"))
        return dict(
            p_glob_star=b.p_glob, eta_star=b.eta, theta_th=b.theta_th,
            delta_pi_global=b.delta_pi_global, delta_pi_local=b.delta_pi_local,
        )
    if target == "competition-entry":
        m_providers = int(params.get("providers", 2))
        o = competition.group_bargain(scenario, m_providers, grid_step)
        return dict(
            p_glob_star=o.p_glob, eta=o.eta, delta_pi_global=o.delta_pi_global,
            delta_pi_local_each=o.delta_pi_local_each,
        )
    raise ValueError(f"unknown target {target!r}")


# Figure sweeps. Each row function takes one picklable grid point.


def _fig5_row(point):
    c, n, step = point
    ratio = evaluate("congestion", dict(n=n, c=c), step)["ratio"]
    return (c, n, ratio)


def _entry_row(column):
    def row(point):
        t, n, step = point
        out = evaluate("global-entry", dict(n=n, travelers=t), step)
        return (t, n, out[column])

    return row


def _fig8_row(point):
    t, n, step = point
    # Normalized by coverage; G = 1.
    return (t, n, evaluate("global-entry", dict(n=n, travelers=t), step)["delta_pi_local"])


def _fig6_row(point):
    return _entry_row("p_glob_star")(point)


def _fig7_row(point):
    return _entry_row("eta_star")(point)


def _fig9_row(point):
    t, n, step = point
    scenario = entry.EntryScenario.from_counts(n, t)
    try:
        ratio = entry.regime_product_ratio(scenario, step)
    except entry.NoAgreement:
        ratio = float("nan")
    return (t, n, ratio)


def _fig12_row(point):
    t, n, step = point
    scenario = entry.EntryScenario.from_counts(n, t, 0.6)
    try:
        mono = entry.bargain(scenario, step).delta_pi_global
    except entry.NoAgreement:
        mono = float("nan")
    comp = competition.group_bargain(scenario, 2, step).delta_pi_global
    return (t, n, mono, comp)


@dataclass(frozen=True)
class FigureSweep:
    header: tuple[str, ...]
    row: Callable
    outer: tuple[float, ...]
    inner: tuple[float, ...]
    grid_step: float = 1e-5

    def points(self, grid_step: float | None = None):
        step = self.grid_step if grid_step is None else grid_step
        return [(a, b, step) for b, a in itertools.product(self.inner, self.outer)]


_TRAVELERS = tuple(float(t) for t in range(0, 1201, 200))

FIGURES = {
    "fig5": FigureSweep(
        ("c", "N", "ratio"), _fig5_row,
        tuple(float(c) for c in np.linspace(0.0, 0.02, 11)), (100.0, 200.0, 500.0), 1e-4,
    ),
    "fig6": FigureSweep(("T", "N", "p_glob_star"), _fig6_row, _TRAVELERS, (500.0, 1000.0, 1500.0)),
    "fig7": FigureSweep(("T", "N", "eta_star"), _fig7_row, _TRAVELERS, (500.0, 1000.0, 1500.0)),
    "fig8": FigureSweep(("T", "N", "delta_pi_local_per_g"), _fig8_row, _TRAVELERS, (500.0, 1000.0, 1500.0)),
    "fig9": FigureSweep(
        ("T", "N", "ratio"), _fig9_row,
        tuple(float(t) for t in range(100, 1201, 100)), (350.0, 700.0, 1000.0),
    ),
    "fig12": FigureSweep(
        ("T", "N", "monopoly_delta_pi_global", "competition_delta_pi_global"), _fig12_row,
        tuple(float(n) for n in range(100, 1001, 50)), (200.0, 400.0, 600.0),
    ),
}


def _fig12_points(sweep: FigureSweep, step: float):
    # Swept along N for each traveler level.
    return [(t, n, step) for t, n in itertools.product(sweep.inner, sweep.outer)]


def _axis_row(point):
    spec, value, step = point
    params = dict(spec.base)
    params[spec.param] = value
    out = evaluate(spec.target, params, step)
    return (value, *(out[c] for c in TARGET_COLUMNS[spec.target]))


def _map(fn, points: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(p) for p in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


def run_sweep(spec, workers: int = 1, grid_step: float | None = None) -> tuple[tuple[str, ...], list[tuple]]:
    """Compute all rows of a figure id or an ``AxisSpec``, in grid order."""
    if isinstance(spec, AxisSpec):
        step = 1e-5 if grid_step is None else grid_step
        points = [(spec, float(v), step) for v in spec.values()]
        return (spec.param, *TARGET_COLUMNS[spec.target]), _map(_axis_row, points, workers)
    if spec not in FIGURES:
        raise ValueError(f"unknown figure {spec!r}; choose from {sorted(FIGURES)}")
    sweep = FIGURES[spec]
    step = sweep.grid_step if grid_step is None else grid_step
    points = _fig12_points(sweep, step) if spec == "fig12" else sweep.points(step)
    return sweep.header, _map(sweep.row, points, workers)


def to_csv(header: Iterable[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(x) for x in row])
    return buf.getvalue()

