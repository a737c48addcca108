"""Exact equilibrium analysis for a two-turn voting game with costly, timed votes.

Two informed voters on opposite sides pick between voting now and waiting; an
uninformed voter may show up early (and flip a coin) or late (and follow the
interim tally). Everything is computed in exact rationals.
"""

from .closed_form import u_diff, u_early, u_wait
from .equilibrium import (
    EquilibriumReport,
    RegimeLabel,
    SolvedProfile,
    Verdict,
    solve_late_bloomer,
    solve_mixed,
    solve_q1_zero,
    verify_wpbe,
)
from .game import GameParams, IllegalAction, InvalidParams, StrategyProfile, evaluate_profile
from .regimes import average_threshold, classify, solve_all, sweep, SweepSpec

__all__ = [
    "EquilibriumReport", "GameParams", "IllegalAction", "InvalidParams", "RegimeLabel", "SolvedProfile",
    "StrategyProfile", "SweepSpec", "Verdict", "average_threshold", "classify", "evaluate_profile",
    "solve_all", "solve_late_bloomer", "solve_mixed", "solve_q1_zero", "sweep", "u_diff", "u_early",
    "u_wait", "verify_wpbe",
]
