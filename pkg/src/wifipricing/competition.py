"""Global provider entering a market of symmetric zero-price local providers.

Each of the ``m`` local providers covers ``G/m`` and, by Bertrand competition,
charges nothing. The global provider integrates all coverage. It can only win
high-valuation users, who then run at full usage, so its price stays in the
low regime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entry import LN2, LOW_BOUNDARY, EntryScenario, bargain
from .monopoly import grid_search


@dataclass(frozen=True)
class CompetitionEntryOutcome:
    p_glob: float
    eta: float
    switch_threshold: float
    delta_pi_global: float
    delta_pi_local_each: float
    n_providers: int


def switch_threshold(p: float) -> float:
    """Lowest local type that leaves its zero-price provider for global WiFi."""
    if not 0 < p <= LOW_BOUNDARY:
        raise ValueError(f"switch threshold needs 0 < p <= ln2/2, got {p}")
    return 2.0 * p / LN2


def switch_gain(theta, p: float, coverage: float = 1.0):
    """Payoff gain from moving a zero-price local user (coverage G/2) to global WiFi.

    Covers every type: no global demand below ``p``, partial usage on
    ``[p, 2p)`` and full usage from ``2p`` up.
    """
    theta = np.asarray(theta, dtype=float)
    local = theta * LN2 / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        partial = theta * np.log(theta / p) - theta + p
    full = theta * LN2 - p
    glob = np.where(theta < p, 0.0, np.where(theta < 2 * p, partial, full))
    out = coverage * (glob - local)
    return float(out) if out.ndim == 0 else out


def revenue_base(p, scenario: EntryScenario):
    """Global revenue in the market before any sharing, ``F(p)``."""
    p = np.asarray(p, dtype=float)
    n, t = scenario.n_users, scenario.travelers
    out = scenario.coverage * p * (n * (1.0 - 2.0 * p / LN2) + t * (1.0 - 1.5 * p))
    return float(out) if out.ndim == 0 else out


def _check_share(eta: float, m_providers: int) -> None:
    if m_providers < 2:
        raise ValueError(f"need at least two local providers, got {m_providers}")
    if eta < 0 or m_providers * eta > 1:
        raise ValueError(f"shares eta={eta} for {m_providers} providers exceed the revenue")


def delta_pi_global_comp(eta, p, scenario: EntryScenario, m_providers: int = 2):
    _check_share(eta, m_providers)
    return (1.0 - m_providers * eta) * revenue_base(p, scenario)


def delta_pi_local_comp(eta, p, scenario: EntryScenario, m_providers: int = 2):
    """Increase for each local provider; they earned nothing before entry."""
    _check_share(eta, m_providers)
    return eta * revenue_base(p, scenario)


def competition_price_closed_form(scenario: EntryScenario) -> float:
    """Stationary point ``(N+T)/(4N/ln2 + 3T)`` of ``F``, clipped to the low regime."""
    n, t = scenario.n_users, scenario.travelers
    return float(np.clip((n + t) / (4.0 * n / LN2 + 3.0 * t), 0.0, LOW_BOUNDARY))


def group_bargain(
    scenario: EntryScenario, m_providers: int = 2, grid_step: float = 1e-5
) -> CompetitionEntryOutcome:
    """Simultaneous bargain between the global provider and ``m`` local providers.

    The Nash product ``eta^m (1 - m eta) F(p)^(m+1)`` separates: the share is
    ``1/(m+1)`` for any price, and the price maximizes ``F`` over the low
    regime, found by exhaustive search.
    """
    if m_providers < 2:
        raise ValueError(f"need at least two local providers, got {m_providers}")
    eta = 1.0 / (m_providers + 1)
    p, base = grid_search(lambda q: revenue_base(q, scenario), 0.0, LOW_BOUNDARY, grid_step)
    return CompetitionEntryOutcome(
        p_glob=p,
        eta=eta,
        switch_threshold=2.0 * p / LN2,
        delta_pi_global=(1.0 - m_providers * eta) * base,
        delta_pi_local_each=eta * base,
        n_providers=m_providers,
    )


def monopoly_vs_competition(
    scenario: EntryScenario, grid_step: float = 1e-5
) -> tuple[float, float]:
    """Global provider's equilibrium gain with one local monopolist vs two competitors.

    The monopolist covers the same total ``G`` the two competitors share.
    """
    mono = bargain(scenario, grid_step)
    comp = group_bargain(scenario, 2, grid_step)
    return mono.delta_pi_global, comp.delta_pi_global
