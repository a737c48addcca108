"""The two-turn, three-voter timing game and an exact evaluator for its tree.

Three voters take part. Two of them are informed and strategic: ``F`` wants the
proposal to pass and ``A`` wants it to fail. Each informed voter either votes in
turn 1 or waits, and a voter who waited then votes or abstains in turn 2. The
third voter is uninformed. It shows up in turn 1 with probability ``q1`` and
flips a fair coin. It shows up in turn 2 with probability ``q2`` and backs
whichever side leads the public tally left by turn 1 (coin on a tie). Otherwise
it never shows up. Ties in the final count are settled by another fair coin.

Everything here works on :class:`fractions.Fraction`, so probabilities of
terminal paths sum to exactly one and utilities compare with ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .rational import HALF, ONE, ZERO, as_rational


class InvalidParams(ValueError):
    """Raised for parameters or profiles outside their admissible ranges."""


class IllegalAction(ValueError):
    """Raised when an action is not available at an information set."""


class VoterType(Enum):
    IN_FAVOR = "F"
    AGAINST = "A"
    UNINFORMED = "U"


class Side(Enum):
    """Direction of a single vote, or the winning alternative."""

    FOR = "F"
    AGAINST = "A"


class InformedAction(Enum):
    VOTE = "vote"
    WAIT = "wait"
    ABSTAIN = "abstain"


class Arrival(Enum):
    EARLY = "early"
    LATE = "late"
    NEVER = "never"


@dataclass(frozen=True, order=True)
class Tally:
    """Public vote count as ``<for, against>``."""

    for_votes: int = 0
    against_votes: int = 0

    def __post_init__(self):
        if self.for_votes < 0 or self.against_votes < 0:
            raise ValueError(f"negative vote count in {self.for_votes, self.against_votes}")
        if self.for_votes + self.against_votes > 3:
            raise ValueError("at most three ballots exist in this game")

    def plus(self, side: Side) -> "Tally":
        if side is Side.FOR:
            return Tally(self.for_votes + 1, self.against_votes)
        return Tally(self.for_votes, self.against_votes + 1)

    def swapped(self) -> "Tally":
        """The same count seen by the opposite informed type."""
        return Tally(self.against_votes, self.for_votes)

    @property
    def margin(self) -> int:
        return self.for_votes - self.against_votes

    def __str__(self) -> str:
        return f"<{self.for_votes},{self.against_votes}>"


# Tallies an informed voter can face in turn 2 after waiting, in profile field order.
LATE_TALLIES = (Tally(0, 0), Tally(1, 0), Tally(0, 1), Tally(1, 1), Tally(0, 2))
_LATE_FIELD = dict(zip(LATE_TALLIES, ("p2_00", "p2_10", "p2_01", "p2_11", "p2_02")))


def bandwagon_vote(tally: Tally) -> dict[Side, Fraction]:
    """How the uninformed voter splits when it arrives facing ``tally``."""
    if tally.margin > 0:
        return {Side.FOR: ONE}
    if tally.margin < 0:
        return {Side.AGAINST: ONE}
    return {Side.FOR: HALF, Side.AGAINST: HALF}


def final_outcome(tally: Tally) -> dict[Side, Fraction]:
    """Distribution of the winner given the count after turn 2."""
    return bandwagon_vote(tally)


@dataclass(frozen=True)
class GameParams:
    """Voting cost and the uninformed voter's arrival probabilities.

    The chance that the uninformed voter never arrives is derived on demand
    (:attr:`q_never`) rather than stored.
    """

    cost: Fraction
    q1: Fraction
    q2: Fraction

    def __post_init__(self):
        for name in ("cost", "q1", "q2"):
            try:
                object.__setattr__(self, name, as_rational(getattr(self, name)))
            except (TypeError, ValueError) as exc:
                raise InvalidParams(f"{name}: {exc}") from None
        if not ZERO <= self.cost < ONE:
            raise InvalidParams(f"cost must lie in [0, 1), got {self.cost}")
        if self.q1 < 0 or self.q2 < 0:
            raise InvalidParams("arrival probabilities must be non-negative")
        if self.q1 + self.q2 > 1:
            raise InvalidParams(f"q1 + q2 = {self.q1 + self.q2} exceeds 1")

    @property
    def q_never(self) -> Fraction:
        return ONE - self.q1 - self.q2


PROFILE_FIELDS = ("p1", "p2_00", "p2_10", "p2_01", "p2_11", "p2_02")


@dataclass(frozen=True)
class StrategyProfile:
    """Symmetric informed-voter strategy, written from the ``F`` voter's side.

    ``p1`` is the chance of voting in turn 1. ``p2_xy`` is the chance of voting
    in turn 2 after waiting and seeing ``x`` votes for one's own side and ``y``
    against it. The ``A`` voter reads the same table with the tally mirrored.
    """

    p1: Fraction
    p2_00: Fraction
    p2_10: Fraction
    p2_01: Fraction
    p2_11: Fraction = ONE
    p2_02: Fraction = ZERO

    def __post_init__(self):
        for name in PROFILE_FIELDS:
            try:
                value = as_rational(getattr(self, name))
            except (TypeError, ValueError) as exc:
                raise InvalidParams(f"{name}: {exc}") from None
            if not ZERO <= value <= ONE:
                raise InvalidParams(f"{name} = {value} is not a probability")
            object.__setattr__(self, name, value)

    def late(self, tally: Tally) -> Fraction:
        """Turn-2 voting probability after waiting and observing ``tally`` (own side first)."""
        try:
            return getattr(self, _LATE_FIELD[tally])
        except KeyError:
            raise IllegalAction(f"a voter who waited never observes {tally}") from None

    def with_fields(self, **changes) -> "StrategyProfile":
        return replace(self, **changes)

    def as_tuple(self) -> tuple[Fraction, ...]:
        return tuple(getattr(self, name) for name in PROFILE_FIELDS)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.as_tuple()) + ")"


@dataclass(frozen=True)
class ChanceOutcome:
    arrival: Arrival
    early_coin: Side | None
    tie_coins: tuple[Side, ...] = ()

    def __post_init__(self):
        if (self.early_coin is not None) != (self.arrival is Arrival.EARLY):
            raise ValueError("the early coin is flipped exactly when the uninformed voter arrives early")


@dataclass(frozen=True)
class History:
    """Everything that happened in turn 1: chance, plus both informed voters' timing."""

    arrival: Arrival
    early_coin: Side | None
    f_early: bool
    a_early: bool

    @property
    def interim(self) -> Tally:
        t = Tally(int(self.f_early), int(self.a_early))
        return t.plus(self.early_coin) if self.early_coin is not None else t

    def __str__(self) -> str:
        if self.arrival is Arrival.EARLY:
            who = f"U early {self.early_coin.value}"
        else:
            who = "U late" if self.arrival is Arrival.LATE else "U absent"
        return f"{who}; A {'voted' if self.a_early else 'waited'}"


@dataclass(frozen=True)
class TerminalPath:
    chance: ChanceOutcome
    f_turn1: InformedAction
    a_turn1: InformedAction
    f_turn2: InformedAction | None
    a_turn2: InformedAction | None
    uninformed_vote: Side | None
    interim: Tally
    final: Tally
    winner: Side

    def voted(self, voter: VoterType) -> bool:
        if voter is VoterType.IN_FAVOR:
            return InformedAction.VOTE in (self.f_turn1, self.f_turn2)
        if voter is VoterType.AGAINST:
            return InformedAction.VOTE in (self.a_turn1, self.a_turn2)
        return self.uninformed_vote is not None

    def utility(self, voter: VoterType, cost: Fraction) -> Fraction:
        """Payoff of an informed voter: +1 or -1 on the outcome, less ``cost`` if it voted."""
        if voter is VoterType.UNINFORMED:
            raise ValueError("the uninformed voter has no payoff in this model")
        mine = Side.FOR if voter is VoterType.IN_FAVOR else Side.AGAINST
        base = ONE if self.winner is mine else -ONE
        return base - cost if self.voted(voter) else base

    @property
    def code(self) -> int:
        """Dense integer id in ``range(PATH_CODES)`` used by the sampling kernels."""
        return encode_path(self)

    @property
    def label(self) -> str:
        return path_label(self.code)


@dataclass(frozen=True)
class Outcome:
    path: TerminalPath
    probability: Fraction
    utility: Fraction


class OwnHistory(Enum):
    UNDECIDED = "undecided"
    WAITED = "waited"
    VOTED_EARLY = "voted_early"


@dataclass(frozen=True)
class InfoSetId:
    """An ``F``-type information set: what it did so far and the tally it sees."""

    own_history: OwnHistory
    observed_tally: Tally
    turn: int

    def __post_init__(self):
        if self.turn == 1:
            if self.own_history is not OwnHistory.UNDECIDED or self.observed_tally != Tally():
                raise ValueError("turn 1 has a single information set at the empty tally")
        elif self.turn == 2:
            if self.own_history is OwnHistory.UNDECIDED:
                raise ValueError("in turn 2 the voter has either voted or waited")
            if self.own_history is OwnHistory.WAITED and self.observed_tally not in LATE_TALLIES:
                raise ValueError(f"a voter who waited never observes {self.observed_tally}")
        else:
            raise ValueError("the game has two turns")

    def legal_actions(self) -> tuple[InformedAction, ...]:
        if self.turn == 1:
            return (InformedAction.VOTE, InformedAction.WAIT)
        if self.own_history is OwnHistory.WAITED:
            return (InformedAction.VOTE, InformedAction.ABSTAIN)
        return ()

    @property
    def name(self) -> str:
        if self.turn == 1:
            return "turn1"
        prefix = "waited" if self.own_history is OwnHistory.WAITED else "voted"
        t = self.observed_tally
        return f"{prefix}_{t.for_votes}{t.against_votes}"

    def __str__(self) -> str:
        return self.name


TURN_ONE = InfoSetId(OwnHistory.UNDECIDED, Tally(), 1)
MUSTARD = InfoSetId(OwnHistory.WAITED, Tally(0, 0), 2)
WHITE = InfoSetId(OwnHistory.WAITED, Tally(1, 0), 2)
GREEN = InfoSetId(OwnHistory.WAITED, Tally(0, 1), 2)
LEVEL = InfoSetId(OwnHistory.WAITED, Tally(1, 1), 2)
BURIED = InfoSetId(OwnHistory.WAITED, Tally(0, 2), 2)
#: Sets where the ``F`` voter still has a choice to make.
DECISION_SETS = (TURN_ONE, MUSTARD, WHITE, GREEN, LEVEL, BURIED)
#: Sets reached after voting early; the voter has nothing left to decide there.
SPENT_SETS = tuple(
    InfoSetId(OwnHistory.VOTED_EARLY, t, 2)
    for t in (Tally(1, 0), Tally(2, 0), Tally(1, 1), Tally(2, 1), Tally(1, 2))
)


def _split(p: Fraction) -> Iterator[tuple[bool, Fraction]]:
    if p:
        yield True, p
    if p != 1:
        yield False, ONE - p


def turn_one_histories(params: GameParams, f_p1: Fraction, a_p1: Fraction) -> Iterator[tuple[History, Fraction]]:
    """Turn-1 histories with positive probability, together with that probability."""
    arrivals = ((Arrival.EARLY, params.q1), (Arrival.LATE, params.q2), (Arrival.NEVER, params.q_never))
    for arrival, p_arrival in arrivals:
        if not p_arrival:
            continue
        coins = ((Side.FOR, HALF), (Side.AGAINST, HALF)) if arrival is Arrival.EARLY else ((None, ONE),)
        for coin, p_coin in coins:
            for f_early, p_f in _split(f_p1):
                for a_early, p_a in _split(a_p1):
                    yield History(arrival, coin, f_early, a_early), p_arrival * p_coin * p_f * p_a


def all_histories() -> Iterator[History]:
    """Every structurally possible turn-1 history, regardless of probability."""
    for arrival in Arrival:
        for coin in ((Side.FOR, Side.AGAINST) if arrival is Arrival.EARLY else (None,)):
            for f_early in (True, False):
                for a_early in (True, False):
                    yield History(arrival, coin, f_early, a_early)


def _vote_split(p: Fraction) -> Iterator[tuple[InformedAction, Fraction]]:
    for voted, w in _split(p):
        yield (InformedAction.VOTE if voted else InformedAction.ABSTAIN), w


def _continuations(h: History, f_strategy: StrategyProfile, a_strategy: StrategyProfile) -> Iterator[tuple[TerminalPath, Fraction]]:
    """Turn-2 play following ``h``, with probabilities conditional on ``h``."""
    interim = h.interim
    chance_early = ChanceOutcome(h.arrival, h.early_coin)
    f_options = ((None, ONE),) if h.f_early else tuple(_vote_split(f_strategy.late(interim)))
    a_options = ((None, ONE),) if h.a_early else tuple(_vote_split(a_strategy.late(interim.swapped())))
    if h.arrival is Arrival.LATE:
        late_options = tuple(bandwagon_vote(interim).items())
    else:
        late_options = ((None, ONE),)
    f1 = InformedAction.VOTE if h.f_early else InformedAction.WAIT
    a1 = InformedAction.VOTE if h.a_early else InformedAction.WAIT
    for f2, pf in f_options:
        for a2, pa in a_options:
            for u_late, pu in late_options:
                final = interim
                if f2 is InformedAction.VOTE:
                    final = final.plus(Side.FOR)
                if a2 is InformedAction.VOTE:
                    final = final.plus(Side.AGAINST)
                if u_late is not None:
                    final = final.plus(u_late)
                coins = (u_late,) if u_late is not None and interim.margin == 0 else ()
                for winner, pw in final_outcome(final).items():
                    tie = (winner,) if final.margin == 0 else ()
                    chance = replace(chance_early, tie_coins=coins + tie)
                    u_vote = h.early_coin if h.arrival is Arrival.EARLY else u_late
                    path = TerminalPath(chance, f1, a1, f2, a2, u_vote, interim, final, winner)
                    yield path, pf * pa * pu * pw


def enumerate_outcomes(
    profile: StrategyProfile,
    params: GameParams,
    *,
    f_strategy: StrategyProfile | None = None,
    a_strategy: StrategyProfile | None = None,
) -> list[Outcome]:
    """List every terminal path with positive probability and the ``F`` voter's payoff there.

    ``f_strategy``/``a_strategy`` override the profile for one side, which is how
    unilateral deviations are evaluated.
    """
    f_strategy = f_strategy or profile
    a_strategy = a_strategy or profile
    out = []
    for h, w in turn_one_histories(params, f_strategy.p1, a_strategy.p1):
        for path, pc in _continuations(h, f_strategy, a_strategy):
            out.append(Outcome(path, w * pc, path.utility(VoterType.IN_FAVOR, params.cost)))
    return out


def evaluate_profile(
    profile: StrategyProfile,
    params: GameParams,
    *,
    f_strategy: StrategyProfile | None = None,
    a_strategy: StrategyProfile | None = None,
    voter: VoterType = VoterType.IN_FAVOR,
) -> Fraction:
    """Ex-ante expected payoff of ``voter`` (``F`` by default)."""
    f_strategy = f_strategy or profile
    a_strategy = a_strategy or profile
    total = ZERO
    for h, w in turn_one_histories(params, f_strategy.p1, a_strategy.p1):
        for path, pc in _continuations(h, f_strategy, a_strategy):
            total += w * pc * path.utility(voter, params.cost)
    return total


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


def history_value(h: History, f_vote: Fraction, a_vote: Fraction, cost: Fraction) -> Fraction:
    """Expected ``F`` payoff after ``h`` when the still-undecided informed voters
    vote with the given probabilities. Coins are averaged out, so ties count as 0.
    """
    interim = h.interim
    f_opts = ((0, ONE),) if h.f_early else tuple((int(v), p) for v, p in _split(f_vote))
    a_opts = ((0, ONE),) if h.a_early else tuple((int(v), p) for v, p in _split(a_vote))
    if h.arrival is Arrival.LATE:
        s = _sign(interim.margin)
        u_opts = ((s, ONE),) if s else ((1, HALF), (-1, HALF))
    else:
        u_opts = ((0, ONE),)
    value = ZERO
    for fv, pf in f_opts:
        for av, pa in a_opts:
            for uv, pu in u_opts:
                value += pf * pa * pu * _sign(interim.margin + fv - av + uv)
    return value - cost * (ONE if h.f_early else f_vote)


def opponent_late_vote(h: History, profile: StrategyProfile) -> Fraction:
    """Chance that ``A`` votes in turn 2 after ``h`` (zero if it already voted)."""
    return ZERO if h.a_early else profile.late(h.interim.swapped())


def turn_one_values(profile: StrategyProfile, params: GameParams) -> tuple[Fraction, Fraction]:
    """``F``'s expected payoff from voting in turn 1 and from waiting, everything
    else following ``profile``. Same numbers as :func:`evaluate_profile` with a
    deviating ``F``, computed by folding turn 2 into :func:`history_value`."""
    a_p1 = profile.p1
    early = ZERO
    for h, w in turn_one_histories(params, ONE, a_p1):
        early += w * history_value(h, ZERO, opponent_late_vote(h, profile), params.cost)
    wait = ZERO
    for h, w in turn_one_histories(params, ZERO, a_p1):
        wait += w * history_value(h, profile.late(h.interim), opponent_late_vote(h, profile), params.cost)
    return early, wait


def waited_states(profile: StrategyProfile, params: GameParams, tally: Tally) -> list[tuple[History, Fraction]]:
    """Histories in the set ``(waited, tally)`` weighted by their probability given that ``F`` waited."""
    return [
        (h, w)
        for h, w in turn_one_histories(params, ZERO, profile.p1)
        if h.interim == tally
    ]


def structural_waited_states(tally: Tally) -> list[History]:
    """Histories that could land ``F`` in ``(waited, tally)`` under some parameters."""
    return [h for h in all_histories() if not h.f_early and h.interim == tally]


def evaluate_conditional(
    profile: StrategyProfile,
    params: GameParams,
    info_set: InfoSetId,
    action: InformedAction,
    *,
    belief: Mapping[History, Fraction] | None = None,
) -> Fraction | None:
    """Expected ``F`` payoff of taking ``action`` at ``info_set``, everyone else following ``profile``.

    States are weighted by Bayes' rule given that ``F`` reached the set. Pass
    ``belief`` to impose a different weighting (used for off-path diagnostics).
    Returns ``None`` when the set is reached with probability zero and no
    belief was supplied.
    """
    if action not in info_set.legal_actions():
        raise IllegalAction(f"{action.value} is not available at {info_set}")
    if info_set.turn == 1:
        early, wait = turn_one_values(profile, params)
        return early if action is InformedAction.VOTE else wait
    tally = info_set.observed_tally
    states = list(belief.items()) if belief is not None else waited_states(profile, params, tally)
    total = sum((w for _, w in states), ZERO)
    if not total:
        return None
    f_vote = ONE if action is InformedAction.VOTE else ZERO
    acc = sum(
        (w * history_value(h, f_vote, opponent_late_vote(h, profile), params.cost) for h, w in states),
        ZERO,
    )
    return acc / total


# --- path codes shared with the sampling kernels ---------------------------------

#: Number of distinct path codes (5 uninformed states x 3 x 3 informed states x 2 winners).
PATH_CODES = 90
_U_STATES = ((Arrival.EARLY, Side.FOR), (Arrival.EARLY, Side.AGAINST),
             (Arrival.LATE, Side.FOR), (Arrival.LATE, Side.AGAINST), (Arrival.NEVER, None))
_U_LABEL = ("EF", "EA", "LF", "LA", "N-")
_I_LABEL = ("V.", "WV", "WX")


def _informed_state(turn1: InformedAction, turn2: InformedAction | None) -> int:
    if turn1 is InformedAction.VOTE:
        return 0
    return 1 if turn2 is InformedAction.VOTE else 2


def encode_path(path: TerminalPath) -> int:
    u = _U_STATES.index((path.chance.arrival, path.uninformed_vote))
    f = _informed_state(path.f_turn1, path.f_turn2)
    a = _informed_state(path.a_turn1, path.a_turn2)
    w = 0 if path.winner is Side.FOR else 1
    return ((u * 3 + f) * 3 + a) * 2 + w


def path_label(code: int) -> str:
    """Compact text form, e.g. ``EF|WV|V.|F`` (uninformed, F, A, winner)."""
    rest, w = divmod(code, 2)
    rest, a = divmod(rest, 3)
    u, f = divmod(rest, 3)
    return f"{_U_LABEL[u]}|{_I_LABEL[f]}|{_I_LABEL[a]}|{'FA'[w]}"


def decode_path(code: int) -> TerminalPath:
    """Rebuild the :class:`TerminalPath` behind a kernel code; raises on impossible codes."""
    if not 0 <= code < PATH_CODES:
        raise ValueError(f"path code {code} out of range")
    rest, w = divmod(code, 2)
    rest, a = divmod(rest, 3)
    u, f = divmod(rest, 3)
    arrival, u_side = _U_STATES[u]
    coin = u_side if arrival is Arrival.EARLY else None
    h = History(arrival, coin, f == 0, a == 0)
    interim = h.interim
    acts = (None, InformedAction.VOTE, InformedAction.ABSTAIN)
    final = interim
    if f == 1:
        final = final.plus(Side.FOR)
    if a == 1:
        final = final.plus(Side.AGAINST)
    coins: tuple[Side, ...] = ()
    if arrival is Arrival.LATE:
        lean = bandwagon_vote(interim)
        if u_side not in lean:
            raise ValueError(f"code {code}: late uninformed vote contradicts the tally {interim}")
        if interim.margin == 0:
            coins = (u_side,)
        final = final.plus(u_side)
    winner = Side.FOR if w == 0 else Side.AGAINST
    if winner not in final_outcome(final):
        raise ValueError(f"code {code}: winner contradicts the final tally {final}")
    if final.margin == 0:
        coins += (winner,)
    return TerminalPath(
        ChanceOutcome(arrival, coin, coins),
        InformedAction.VOTE if f == 0 else InformedAction.WAIT,
        InformedAction.VOTE if a == 0 else InformedAction.WAIT,
        acts[f], acts[a], u_side, interim, final, winner,
    )


def kernel_inputs(
    profile: StrategyProfile,
    params: GameParams,
    *,
    f_strategy: StrategyProfile | None = None,
    a_strategy: StrategyProfile | None = None,
) -> np.ndarray:
    """Float parameter vector consumed by :mod:`votetiming.kernels`.

    Layout: ``q1, q2, f_p1, a_p1``, then two 3x3 tables (flattened, indexed by
    the ``F``-side interim tally) of turn-2 voting probabilities for ``F`` and
    for ``A``.
    """
    f_strategy = f_strategy or profile
    a_strategy = a_strategy or profile
    vec = np.zeros(22, dtype=np.float64)
    vec[:4] = [float(params.q1), float(params.q2), float(f_strategy.p1), float(a_strategy.p1)]
    for t in LATE_TALLIES:
        vec[4 + 3 * t.for_votes + t.against_votes] = float(f_strategy.late(t))
        m = t.swapped()
        vec[13 + 3 * m.for_votes + m.against_votes] = float(a_strategy.late(t))
    return vec


def sample_playout(profile: StrategyProfile, params: GameParams, seed: int) -> TerminalPath:
    """Draw one playout from a generator seeded with ``seed``."""
    from .kernels import playout_codes

    uniforms = np.random.default_rng(seed).random((1, 8))
    return decode_path(int(playout_codes(uniforms, kernel_inputs(profile, params))[0]))


__all__ = [
    "Arrival", "ChanceOutcome", "DECISION_SETS", "GREEN", "GameParams", "History",
    "IllegalAction", "InfoSetId", "InformedAction", "InvalidParams", "LATE_TALLIES",
    "LEVEL", "BURIED", "MUSTARD", "Outcome", "OwnHistory", "PATH_CODES", "PROFILE_FIELDS",
    "SPENT_SETS", "Side", "StrategyProfile", "TURN_ONE", "Tally", "TerminalPath",
    "VoterType", "WHITE", "bandwagon_vote", "decode_path", "encode_path",
    "enumerate_outcomes", "evaluate_conditional", "evaluate_profile", "final_outcome",
    "history_value", "kernel_inputs", "opponent_late_vote", "path_label", "sample_playout",
    "structural_waited_states", "turn_one_histories", "turn_one_values", "waited_states",
]
