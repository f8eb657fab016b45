"""Doubling-cube thresholds for backgammon-like random-walk games.

Submodules: ``regions`` (cube parameter classification), ``thresholds``
(closed forms and recurrences), ``chain_oracle`` (grid-chain verification),
``triangle_walk`` and ``tri_game`` (three-player board and doubling game),
``sim_core`` (seeded streams), ``cli``.
"""
from .regions import STANDARD, CubeParams, Region, classify
from .thresholds import general_dk, limit_threshold, recurrence_schedule, standard_dk

__all__ = [
    "STANDARD",
    "CubeParams",
    "Region",
    "classify",
    "general_dk",
    "limit_threshold",
    "recurrence_schedule",
    "standard_dk",
]
__version__ = "0.1.0"
