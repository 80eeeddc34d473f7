"""Pricing and revenue sharing for local and global WiFi providers."""

from .competition import CompetitionEntryOutcome, group_bargain
from .congestion import ConvergenceError, optimal_congested_flat, optimal_congested_usage
from .duopoly import DuopolyEquilibrium, solve_duopoly, verify_equilibrium
from .entry import BargainOutcome, EntryScenario, NoAgreement, Regime, bargain, medium_partition_threshold
from .market import GlobalMarket, LocalMarket, optimal_demand, traveler_count
from .monopoly import MonopolyOutcome, Scheme, optimal_flat_pricing, optimal_usage_pricing, revenue_ratio
from .oracle import DiscretizedMarket, simulate_revenue

__all__ = [
    "BargainOutcome",
    "CompetitionEntryOutcome",
    "ConvergenceError",
    "DiscretizedMarket",
    "DuopolyEquilibrium",
    "EntryScenario",
    "GlobalMarket",
    "LocalMarket",
    "MonopolyOutcome",
    "NoAgreement",
    "Regime",
    "Scheme",
    "bargain",
    "group_bargain",
    "medium_partition_threshold",
    "optimal_congested_flat",
    "optimal_congested_usage",
    "optimal_demand",
    "optimal_flat_pricing",
    "optimal_usage_pricing",
    "revenue_ratio",
    "simulate_revenue",
    "solve_duopoly",
    "traveler_count",
    "verify_equilibrium",
]
