"""Closed-form payoffs, cost thresholds and indifference solutions.

All functions take and return exact rationals. The payoff formulas assume the
two turn-2 choices that are never in doubt: vote at ``<1,1>`` (``p2_11 = 1``)
and abstain at ``<0,2>`` (``p2_02 = 0``). Profiles built with the
:class:`~votetiming.game.StrategyProfile` defaults satisfy this. For anything
else, evaluate the tree directly with :mod:`votetiming.game`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .game import GameParams, StrategyProfile
from .rational import HALF, ONE, ZERO


class Decision(Enum):
    VOTE = "vote"
    ABSTAIN = "abstain"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class ThresholdDecision:
    """Outcome of comparing the cost with a set's indifference threshold.

    ``threshold`` is ``None`` when the set cannot be reached, in which case
    the decision is always :attr:`Decision.INDIFFERENT`.
    """

    decision: Decision
    threshold: Fraction | None

    @classmethod
    def compare(cls, cost: Fraction, threshold: Fraction) -> "ThresholdDecision":
        if cost < threshold:
            return cls(Decision.VOTE, threshold)
        if cost > threshold:
            return cls(Decision.ABSTAIN, threshold)
        return cls(Decision.INDIFFERENT, threshold)

    @classmethod
    def unreachable(cls) -> "ThresholdDecision":
        return cls(Decision.INDIFFERENT, None)


def mustard_threshold(params: GameParams) -> Fraction | None:
    """Cost at which a voter who waited and sees ``<0,0>`` is indifferent."""
    if params.q1 == 1:
        return None
    return ONE + params.q2 / (2 * (params.q1 - 1))


def mustard_strategy(params: GameParams) -> ThresholdDecision:
    t = mustard_threshold(params)
    return ThresholdDecision.unreachable() if t is None else ThresholdDecision.compare(params.cost, t)


def green_threshold(params: GameParams, p1: Fraction, p2_10: Fraction) -> Fraction | None:
    """Cost at which a voter who waited and trails ``<0,1>`` is indifferent.

    It depends on the opponent's turn-1 rate and on how often the opponent,
    leading ``<1,0>`` from its own side, still votes.
    """
    q1, q2 = params.q1, params.q2
    reach = (2 - 3 * q1) * p1 + q1
    if reach == 0:
        return None
    return ONE + ((p2_10 * q1 - 2 * q2) * p1 - p2_10 * q1) / reach


def green_strategy(params: GameParams, p1: Fraction, p2_10: Fraction) -> ThresholdDecision:
    t = green_threshold(params, Fraction(p1), Fraction(p2_10))
    return ThresholdDecision.unreachable() if t is None else ThresholdDecision.compare(params.cost, t)


def white_strategy(params: GameParams, p2_01: Fraction) -> ThresholdDecision:
    """Leading ``<1,0>`` after waiting: worth voting only while the opponent's
    catch-up rate ``p2_01`` exceeds the cost."""
    if params.q1 == 0:
        return ThresholdDecision.unreachable()
    return ThresholdDecision.compare(params.cost, Fraction(p2_01))


def forced_strategies(params: GameParams) -> tuple[Fraction, ThresholdDecision]:
    """Turn-2 play at ``<1,1>`` (always vote) and the rule at ``<0,2>``.

    At ``<0,2>`` a vote cannot change the result, so abstaining wins whenever
    voting costs anything.
    """
    rule = (
        ThresholdDecision(Decision.INDIFFERENT, ZERO)
        if params.cost == 0
        else ThresholdDecision(Decision.ABSTAIN, ZERO)
    )
    return ONE, rule


def u_early(params: GameParams, profile: StrategyProfile) -> Fraction:
    """Expected payoff of voting in turn 1 against an opponent playing ``profile``.

    An early uninformed coin cancels out. With a late bandwagon voter the vote
    wins outright whenever the opponent waited. With no uninformed voter it
    wins unless the opponent catches up from ``<0,1>``.
    """
    p1, p2_01 = profile.p1, profile.p2_01
    return (1 - p1) * (1 - params.q1 - params.q_never * p2_01) - params.cost


def u_wait(params: GameParams, profile: StrategyProfile) -> Fraction:
    """Expected payoff of waiting in turn 1 and then following ``profile``."""
    c, q1, q2 = params.cost, params.q1, params.q2
    p1, p00, p10, p01 = profile.p1, profile.p2_00, profile.p2_10, profile.p2_01
    opponent_early = (
        c * p00 * (1 - q1)
        + c * p01 * (3 * q1 / 2 - 1)
        + c * p10 * q1 / 2
        - c * q1 / 2
        + p01 * (1 - q1 - q2)
        + q1
        - 1
    )
    return -c * p00 + q1 * c * (p00 - (p01 + p10) / 2) + p1 * opponent_early


def u_diff(params: GameParams, profile: StrategyProfile) -> Fraction:
    """Early-minus-wait payoff gap, written as a polynomial in the cost and ``p1``."""
    c, q1, q2 = params.cost, params.q1, params.q2
    p1, p00, p10, p01 = profile.p1, profile.p2_00, profile.p2_10, profile.p2_01
    return (
        (p00 - 1 + (HALF * (p01 + p10) - p00) * q1) * c
        - ((3 * p01 + p10 - 2 * p00 - 1) * q1 / 2 + (p00 - p01)) * c * p1
        + 1
        - q1
        - (1 - q1 - q2) * p01
    )


def p1_indifference(params: GameParams, p2_00, p2_01, p2_10) -> Fraction | None:
    """Turn-1 voting rate that closes the early/wait gap, or ``None`` if the
    gap does not depend on it (zero cost included)."""
    c, q1, q2 = params.cost, params.q1, params.q2
    p00, p01, p10 = Fraction(p2_00), Fraction(p2_01), Fraction(p2_10)
    num = (p00 * (q1 - 1) - HALF * (p01 + p10) * q1 + 1) * c + p01 * (1 - q1 - q2) + q1 - 1
    den = (HALF * (3 * p01 + p10 - 2 * p00 - 1) * q1 - p01 + p00) * c
    if den == 0:
        return None
    return -num / den


def p1_mixed_timing(params: GameParams, p2_00) -> Fraction | None:
    """The indifference rate after pinning ``p2_01 = c`` and the green-set
    ``p2_10``; depends on the remaining field ``p2_00`` only."""
    c, q1, q2 = params.cost, params.q1, params.q2
    den = 2 * c * ((1 - q1) * Fraction(p2_00) + q1 + q2 - 1)
    if den == 0:
        return None
    return ONE + (2 + (c - 2) * q1 - 2 * c) / den


def p2_10_green_indifference(params: GameParams, p1) -> Fraction | None:
    """The ``p2_10`` that puts the green-set threshold exactly at the cost."""
    c, q1, q2 = params.cost, params.q1, params.q2
    p1 = Fraction(p1)
    den = (p1 - 1) * q1
    if den == 0:
        return None
    return (2 * p1 * q2 - (c - 1) * ((3 * q1 - 2) * p1 - q1)) / den


__all__ = [
    "Decision", "ThresholdDecision", "forced_strategies", "green_strategy", "green_threshold",
    "mustard_strategy", "mustard_threshold", "p1_indifference", "p1_mixed_timing",
    "p2_10_green_indifference", "u_diff", "u_early", "u_wait", "white_strategy",
]
