"""Beliefs, the characterised equilibrium families, and an independent WPBE check.

The verifier never consults the closed forms. It recomputes every
information set's action values from the game tree, so it can catch
transcription slips in :mod:`votetiming.closed_form` as well as bad profiles.

Only the ``F`` side is checked: the profile is symmetric, so the ``A`` voter
faces the mirror image of every situation ``F`` faces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from . import _fasttree as ft
from . import closed_form as cf
from .feasibility import feasible_ptp_one, feasible_ptp_zero
from .game import (
    DECISION_SETS,
    TURN_ONE,
    GameParams,
    History,
    InfoSetId,
    InformedAction,
    InvalidParams,
    OwnHistory,
    StrategyProfile,
    history_value,
    opponent_late_vote,
    structural_waited_states,
    turn_one_histories,
)
from .rational import HALF, ONE, ZERO, format_rational


class RegimeLabel(Enum):
    Q1_ZERO_LOW_COST = "Q1ZeroLowCost"
    Q1_ZERO_MID_COST = "Q1ZeroMidCost"
    Q1_ZERO_HIGH_COST = "Q1ZeroHighCost"
    LATE_BLOOMER_P00_ZERO = "LateBloomerP00Zero"
    LATE_BLOOMER_P00_ONE = "LateBloomerP00One"
    MIXED_TIMING = "MixedTiming"
    UNCLASSIFIED = "Unclassified"


class Verdict(Enum):
    VALID = "Valid"
    INVALID = "Invalid"
    #: Optimal wherever play actually goes, with some decision sets never reached.
    VALID_WITH_OFF_PATH = "ValidWithOffPath"


START = "start"  # the lone state of the turn-1 information set


@dataclass(frozen=True)
class Belief:
    """Posterior over the states of one information set."""

    info_set: InfoSetId
    states: tuple[tuple[History | str, Fraction], ...]
    #: Probability of reaching the set given the owner's own earlier moves.
    reach: Fraction

    def as_mapping(self) -> dict:
        return dict(self.states)


def _own_states(info_set: InfoSetId, profile: StrategyProfile, params: GameParams):
    own_p1 = ONE if info_set.own_history is OwnHistory.VOTED_EARLY else ZERO
    return [
        (h, w)
        for h, w in turn_one_histories(params, own_p1, profile.p1)
        if h.interim == info_set.observed_tally
    ]


def beliefs(info_set: InfoSetId, profile: StrategyProfile, params: GameParams) -> Belief | None:
    """Bayes posterior at ``info_set`` given the owner's own history; ``None`` off path."""
    if info_set.turn == 1:
        return Belief(info_set, ((START, ONE),), ONE)
    states = _own_states(info_set, profile, params)
    reach = sum((w for _, w in states), ZERO)
    if not reach:
        return None
    return Belief(info_set, tuple((h, w / reach) for h, w in states), reach)


def uniform_belief(info_set: InfoSetId) -> Belief:
    states = structural_waited_states(info_set.observed_tally)
    w = Fraction(1, len(states))
    return Belief(info_set, tuple((h, w) for h in states), ZERO)


def set_reach(info_set: InfoSetId, profile: StrategyProfile, params: GameParams) -> Fraction:
    """Unconditional probability that ``F`` lands in ``info_set`` under ``profile``."""
    if info_set.turn == 1:
        return ONE
    return sum(
        (w for h, w in turn_one_histories(params, profile.p1, profile.p1)
         if h.f_early == (info_set.own_history is OwnHistory.VOTED_EARLY)
         and h.interim == info_set.observed_tally),
        ZERO,
    )


@dataclass(frozen=True)
class SetCheck:
    info_set: InfoSetId
    reach: Fraction
    conditional_reach: Fraction
    on_path: bool
    #: Conditional value of each legal action; empty when no belief applies.
    action_values: dict
    prescribed: Fraction | None
    best: Fraction | None
    #: ``"bayes"``, ``"uniform"`` or ``"none"``
    basis: str

    @property
    def gain(self) -> Fraction | None:
        if self.best is None:
            return None
        return self.best - self.prescribed

    def to_dict(self) -> dict:
        fmt = lambda v: None if v is None else format_rational(v)
        return {
            "info_set": self.info_set.name,
            "tally": str(self.info_set.observed_tally),
            "reach": fmt(self.reach),
            "conditional_reach": fmt(self.conditional_reach),
            "on_path": self.on_path,
            "basis": self.basis,
            "values": {a.value: fmt(v) for a, v in self.action_values.items()},
            "prescribed": fmt(self.prescribed),
            "best": fmt(self.best),
            "gain": fmt(self.gain),
        }


@dataclass(frozen=True)
class EquilibriumReport:
    profile: StrategyProfile
    params: GameParams
    verdict: Verdict
    per_set: tuple[SetCheck, ...]
    #: Uniform-belief diagnostics for unreached sets, only when requested.
    off_path: tuple[SetCheck, ...] = ()

    @property
    def is_valid(self) -> bool:
        return self.verdict is not Verdict.INVALID

    def check(self, info_set: InfoSetId) -> SetCheck:
        for row in self.per_set:
            if row.info_set == info_set:
                return row
        raise KeyError(info_set)

    def gain(self, info_set: InfoSetId) -> Fraction | None:
        return self.check(info_set).gain

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "sets": [row.to_dict() for row in self.per_set],
            "off_path_diagnostics": [row.to_dict() for row in self.off_path],
        }


def _mix(p: Fraction, vote: Fraction, other: Fraction) -> Fraction:
    return p * vote + (1 - p) * other


def _turn_two_values(info_set: InfoSetId, profile: StrategyProfile, params: GameParams, states):
    total = sum((w for _, w in states), ZERO)
    vote = abstain = ZERO
    for h, w in states:
        a_vote = opponent_late_vote(h, profile)
        vote += w * history_value(h, ONE, a_vote, params.cost)
        abstain += w * history_value(h, ZERO, a_vote, params.cost)
    vote, abstain = vote / total, abstain / total
    return {InformedAction.VOTE: vote, InformedAction.ABSTAIN: abstain}


def verify_wpbe(profile: StrategyProfile, params: GameParams, check_off_path: bool = False) -> EquilibriumReport:
    """Check sequential rationality of ``profile`` at every reached ``F`` decision set.

    Beliefs come from Bayes' rule. A set counts as reached when its
    unconditional probability is positive. Turn-1 mixing must put weight only
    on the better of voting early and waiting. Unreached sets never affect the
    verdict. With ``check_off_path`` they are re-scored for the report: under
    the owner's own-history posterior when that is defined, and under a uniform
    belief over the set's states otherwise.
    """
    view = ft.View(params, profile)
    early, wait = (ft.to_fraction(x) for x in ft.turn_one(view))
    rows = [SetCheck(
        TURN_ONE, ONE, ONE, True,
        {InformedAction.VOTE: early, InformedAction.WAIT: wait},
        _mix(profile.p1, early, wait), max(early, wait), "bayes",
    )]
    diagnostics = []
    wait_share = 1 - profile.p1
    sums = ft.waited_sets(view)
    for info_set in DECISION_SETS[1:]:
        t = info_set.observed_tally
        key = (t.for_votes, t.against_votes)
        cond, vote, abstain = (ft.to_fraction(x) for x in sums.get(key, (0, 0, 0)))
        reach = wait_share * cond
        p = profile.late(t)
        if reach:
            values = {InformedAction.VOTE: vote / cond, InformedAction.ABSTAIN: abstain / cond}
            prescribed = _mix(p, values[InformedAction.VOTE], values[InformedAction.ABSTAIN])
            rows.append(SetCheck(info_set, reach, cond, True, values, prescribed,
                                 max(values.values()), "bayes"))
            continue
        rows.append(SetCheck(info_set, reach, cond, False, {}, None, None, "none"))
        if check_off_path:
            if cond:
                states, basis = _own_states(info_set, profile, params), "bayes"
            else:
                states, basis = list(uniform_belief(info_set).states), "uniform"
            values = _turn_two_values(info_set, profile, params, states)
            prescribed = _mix(p, values[InformedAction.VOTE], values[InformedAction.ABSTAIN])
            diagnostics.append(SetCheck(info_set, reach, cond, False, values, prescribed,
                                        max(values.values()), basis))
    if any(r.on_path and r.gain != 0 for r in rows):
        verdict = Verdict.INVALID
    elif all(r.on_path for r in rows):
        verdict = Verdict.VALID
    else:
        verdict = Verdict.VALID_WITH_OFF_PATH
    return EquilibriumReport(profile, params, verdict, tuple(rows), tuple(diagnostics))


@dataclass(frozen=True)
class SolvedProfile:
    """A characterised equilibrium with bookkeeping about its free parameters.

    ``indifferent`` names fields that can be set to any probability without
    breaking the equilibrium. ``coupled`` names fields held at an
    indifference value that other fields depend on; moving one of them alone
    generally breaks the equilibrium.
    """

    profile: StrategyProfile
    labels: frozenset[RegimeLabel]
    indifferent: frozenset[str] = field(default_factory=frozenset)
    coupled: frozenset[str] = field(default_factory=frozenset)

    def to_dict(self) -> dict:
        from .game import PROFILE_FIELDS

        return {
            "labels": sorted(label.value for label in self.labels),
            "profile": {k: format_rational(getattr(self.profile, k)) for k in PROFILE_FIELDS},
            "indifferent": sorted(self.indifferent),
            "coupled": sorted(self.coupled),
        }


def _band(cost: Fraction, threshold: Fraction) -> tuple[Fraction, bool]:
    """Vote below the threshold, abstain above; at the threshold keep the vote and flag it."""
    if cost < threshold:
        return ONE, False
    if cost > threshold:
        return ZERO, False
    return ONE, True


def solve_q1_zero(params: GameParams) -> list[SolvedProfile]:
    """Equilibrium when the uninformed voter never arrives in turn 1.

    Voting early is always optimal. Which empty/trailing tallies still pull
    a waiting voter to the polls depends on the cost against ``1 - q2`` and
    ``1 - q2/2``.
    """
    if params.q1 != 0:
        raise InvalidParams("this family needs q1 = 0")
    c, q2 = params.cost, params.q2
    trailing_t, empty_t = ONE - q2, ONE - q2 / 2
    p01, flag01 = _band(c, trailing_t)
    p00, flag00 = _band(c, empty_t)
    profile = StrategyProfile(ONE, p00, ZERO, p01)
    indifferent = {"p2_10"}
    if flag01:
        indifferent.add("p2_01")
    if flag00:
        indifferent.add("p2_00")
    if cf.u_diff(params, profile) == 0:
        indifferent.add("p1")
    if c == 0:
        indifferent.add("p2_02")
    labels = set()
    if c <= trailing_t:
        labels.add(RegimeLabel.Q1_ZERO_LOW_COST)
    if q2 > 0 and trailing_t <= c <= empty_t:
        labels.add(RegimeLabel.Q1_ZERO_MID_COST)
    if c >= empty_t:
        labels.add(RegimeLabel.Q1_ZERO_HIGH_COST)
    return [SolvedProfile(profile, frozenset(labels), frozenset(indifferent))]


def late_bloomer_candidate(params: GameParams, p2_00) -> StrategyProfile:
    """Never vote early, and keep both leaders and trailers exactly indifferent."""
    c = params.cost
    return StrategyProfile(ZERO, p2_00, ONE - c, c)


def solve_late_bloomer(params: GameParams) -> SolvedProfile | None:
    """Equilibrium in which both informed voters always wait, if the point admits one."""
    if params.q1 == 0:
        raise InvalidParams("this family needs q1 > 0")
    c = params.cost
    families = (
        (feasible_ptp_zero(params.q1, params.q2), ZERO, RegimeLabel.LATE_BLOOMER_P00_ZERO),
        (feasible_ptp_one(params.q1, params.q2), ONE, RegimeLabel.LATE_BLOOMER_P00_ONE),
    )
    for interval, p00, label in families:
        if interval is None or not interval.contains(c):
            continue
        profile = late_bloomer_candidate(params, p00)
        gap = cf.u_diff(params, profile)
        if gap > 0 or not verify_wpbe(profile, params).is_valid:
            continue
        coupled = {"p2_01", "p2_10"}
        if gap == 0:
            coupled.add("p1")
        if c == cf.mustard_threshold(params):
            coupled.add("p2_00")
        return SolvedProfile(profile, frozenset({label}), frozenset(), frozenset(coupled))
    return None


def solve_mixed(params: GameParams) -> list[SolvedProfile]:
    """Equilibria that mix over turn-1 timing, built from the indifference conditions.

    The trailing-tally rate is pinned to the cost, the leading-tally rate to
    the value that makes trailers indifferent, and ``p1`` to the value that
    makes early and late voting pay the same. The empty-tally rate is the
    best response there: 1 below its threshold, 0 above, and at the threshold
    0, 1 and the representative interior value 1/2 are all tried.
    """
    if params.q1 == 0 or params.cost == 0:
        return []
    c = params.cost
    m = cf.mustard_threshold(params)
    if m is None:
        options = (ZERO, ONE)
    elif c < m:
        options = (ONE,)
    elif c > m:
        options = (ZERO,)
    else:
        options = (ZERO, HALF, ONE)
    found = []
    for p00 in options:
        p1 = cf.p1_mixed_timing(params, p00)
        if p1 is None or not ZERO < p1 < ONE:
            continue
        p10 = cf.p2_10_green_indifference(params, p1)
        if p10 is None or not ZERO <= p10 <= ONE:
            continue
        profile = StrategyProfile(p1, p00, p10, c)
        if not verify_wpbe(profile, params).is_valid:
            continue
        coupled = {"p1", "p2_10", "p2_01"}
        if m is not None and c == m:
            coupled.add("p2_00")
        found.append(SolvedProfile(profile, frozenset({RegimeLabel.MIXED_TIMING}),
                                   frozenset(), frozenset(coupled)))
    return found


__all__ = [
    "Belief", "EquilibriumReport", "RegimeLabel", "SetCheck", "SolvedProfile", "START",
    "Verdict", "beliefs", "late_bloomer_candidate", "set_reach", "solve_late_bloomer",
    "solve_mixed", "solve_q1_zero", "uniform_belief", "verify_wpbe",
]
