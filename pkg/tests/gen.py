"""Random exact-rational inputs shared by the property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from votetiming.game import GameParams, StrategyProfile


def unit_rationals(max_den: int = 24, *, upper_open: bool = False):
    """Fractions in [0, 1] (or [0, 1) with ``upper_open``) with small denominators."""
    def build(den):
        top = den - 1 if upper_open else den
        return st.integers(0, top).map(lambda k: Fraction(k, den))
    return st.integers(1, max_den).flatmap(build)


@st.composite
def game_params(draw, max_den: int = 24, q1_positive: bool = False):
    cost = draw(unit_rationals(max_den, upper_open=True))
    q1 = draw(unit_rationals(max_den))
    if q1_positive and q1 == 0:
        q1 = Fraction(1, max_den)
    q2 = draw(unit_rationals(max_den)) * (1 - q1)
    return GameParams(cost, q1, q2)


@st.composite
def profiles(draw, max_den: int = 24, standard_tail: bool = True):
    fields = [draw(unit_rationals(max_den)) for _ in range(4)]
    if standard_tail:
        return StrategyProfile(*fields)
    return StrategyProfile(*fields, draw(unit_rationals(max_den)), draw(unit_rationals(max_den)))


def random_unit(rng: random.Random, max_den: int = 40, upper_open: bool = False) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den - 1 if upper_open else den), den)


def random_params(rng: random.Random, max_den: int = 40) -> GameParams:
    q1 = random_unit(rng, max_den)
    return GameParams(random_unit(rng, max_den, upper_open=True), q1, random_unit(rng, max_den) * (1 - q1))


def random_profile(rng: random.Random, max_den: int = 40) -> StrategyProfile:
    return StrategyProfile(*(random_unit(rng, max_den) for _ in range(4)))
