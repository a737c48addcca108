"""Lean exact walk over turn-1 histories, used where the tree is evaluated
hundreds of thousands of times (verification sweeps).

It mirrors ``game.history_value``/``game.turn_one_histories`` on plain tuples
and, when gmpy2 is importable, on ``mpq`` rationals, which are an order of
magnitude faster than :class:`fractions.Fraction`. Results are converted back to
``Fraction`` before they leave the package. The object-based evaluator in
:mod:`votetiming.game` stays the reference, and the test suite checks the two
agree.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction

_ZERO, _ONE, _HALF = Q(0), Q(1), Q(1, 2)

# (arrival, early coin, f_early, a_early, interim for-votes, interim against-votes)
# arrival: 0 early, 1 late, 2 never; coin: +1 for, -1 against, 0 none
HISTORIES = tuple(
    (arr, coin, fe, ae, int(fe) + (coin == 1), int(ae) + (coin == -1))
    for arr, coins in ((0, (1, -1)), (1, (0,)), (2, (0,)))
    for coin in coins
    for fe in (True, False)
    for ae in (True, False)
)

_LATE_INDEX = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3, (0, 2): 4}


def to_q(x) -> "Q":
    return Q(x.numerator, x.denominator)


def to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class View:
    """Rational snapshot of the parameters and a symmetric profile."""

    __slots__ = ("cost", "arrive", "p1", "late")

    def __init__(self, params, profile):
        self.cost = to_q(params.cost)
        q1, q2 = to_q(params.q1), to_q(params.q2)
        self.arrive = (q1, q2, _ONE - q1 - q2)
        self.p1 = to_q(profile.p1)
        self.late = tuple(to_q(v) for v in profile.as_tuple()[1:])


def late_prob(view: View, vf: int, va: int):
    """Own-side turn-2 voting rate at tally ``(vf, va)``."""
    return view.late[_LATE_INDEX[(vf, va)]]


def weighted(view: View, f_p1, a_p1):
    for hist in HISTORIES:
        arr, coin, fe, ae = hist[:4]
        w = view.arrive[arr]
        if not w:
            continue
        if coin:
            w = w * _HALF
        w = w * (f_p1 if fe else _ONE - f_p1)
        if not w:
            continue
        w = w * (a_p1 if ae else _ONE - a_p1)
        if w:
            yield hist, w


def opponent_vote(view: View, hist):
    if hist[3]:
        return _ZERO
    return late_prob(view, hist[5], hist[4])


def value(hist, f_vote, a_vote, cost):
    """Expected ``F`` payoff after ``hist`` with the given turn-2 voting rates."""
    arr, _, fe, ae, vf, va = hist
    margin = vf - va
    f_opts = ((0, _ONE),) if fe else _split(f_vote)
    a_opts = ((0, _ONE),) if ae else _split(a_vote)
    if arr == 1:
        u_opts = ((1, _ONE),) if margin > 0 else ((-1, _ONE),) if margin < 0 else ((1, _HALF), (-1, _HALF))
    else:
        u_opts = ((0, _ONE),)
    total = _ZERO
    for fv, pf in f_opts:
        for av, pa in a_opts:
            pfa = pf * pa
            for uv, pu in u_opts:
                m = margin + fv - av + uv
                if m > 0:
                    total += pfa * pu
                elif m < 0:
                    total -= pfa * pu
    return total - cost * (_ONE if fe else f_vote)


def _split(p):
    if not p:
        return ((0, _ONE),)
    if p == 1:
        return ((1, _ONE),)
    return ((1, p), (0, _ONE - p))


def turn_one(view: View):
    """(voting early, waiting) expected payoffs."""
    early = _ZERO
    for hist, w in weighted(view, _ONE, view.p1):
        early += w * value(hist, _ZERO, opponent_vote(view, hist), view.cost)
    wait = _ZERO
    for hist, w in weighted(view, _ZERO, view.p1):
        wait += w * value(hist, late_prob(view, hist[4], hist[5]), opponent_vote(view, hist), view.cost)
    return early, wait


def waited_sets(view: View):
    """Per turn-2 tally after waiting: conditional reach and the vote/abstain values (unnormalised)."""
    acc = {}
    for hist, w in weighted(view, _ZERO, view.p1):
        key = (hist[4], hist[5])
        a_vote = opponent_vote(view, hist)
        vote = w * value(hist, _ONE, a_vote, view.cost)
        abstain = w * value(hist, _ZERO, a_vote, view.cost)
        if key in acc:
            r, v, a = acc[key]
            acc[key] = (r + w, v + vote, a + abstain)
        else:
            acc[key] = (w, vote, abstain)
    return acc
