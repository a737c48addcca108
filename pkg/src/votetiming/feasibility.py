"""Where waiting in turn 1 can be an equilibrium, as exact cost intervals.

Two families exist, told apart by what a waiting voter does at the empty
tally ``<0,0>``: always vote (``p2_00 = 1``) or never vote (``p2_00 = 0``).
Their ``(q1, q2)`` regions are bounded by quadratic surds. Membership is
settled exactly here by comparing squares of rationals, so no rounding can put
a point on the wrong side.

The endpoint conventions are collected in :data:`ENDPOINTS` so downstream
code (and users) can see at a glance which brackets are open or closed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rational import ONE, as_rational


@dataclass(frozen=True)
class Surd:
    """The real number ``(offset + sign * sqrt(radicand)) / scale``."""

    offset: Fraction
    sign: int
    radicand: Fraction
    scale: Fraction

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def real(self) -> bool:
        return self.radicand >= 0

    def compare(self, x: Fraction) -> int:
        """Sign of ``x - self``: -1, 0 or +1, decided without irrational arithmetic."""
        if not self.real:
            raise ValueError("square root of a negative number")
        y = self.scale * x - self.offset  # compare y against sign*sqrt(radicand)
        sq = y * y
        if self.sign > 0:
            if y < 0:
                return -1
            return (sq > self.radicand) - (sq < self.radicand)
        if y > 0:
            return 1
        return (sq < self.radicand) - (sq > self.radicand)

    def __float__(self) -> float:
        return (float(self.offset) + self.sign * float(self.radicand) ** 0.5) / float(self.scale)


def _f(x) -> Fraction:
    return as_rational(x)


SQRT2_GAP = Surd(Fraction(2), -1, Fraction(2), ONE)            # 2 - sqrt(2)
ONE_REGION_Q2_CAP = Surd(Fraction(14), -1, Fraction(32), Fraction(41))  # (14 - 4 sqrt(2)) / 41


def zero_region_roots(q2: Fraction) -> tuple[Surd, Surd]:
    """Lower and upper ``q1`` roots splitting the never-vote family's two branches."""
    q2 = _f(q2)
    rad = Fraction(33, 4) * q2 * q2 - 5 * q2 + 1
    off = 3 - Fraction(7, 2) * q2
    return Surd(off, -1, rad, Fraction(2)), Surd(off, 1, rad, Fraction(2))


def one_region_roots(q2: Fraction) -> tuple[Surd, Surd]:
    """``q1`` bracket of the always-vote family at fixed ``q2``."""
    q2 = _f(q2)
    rad = 41 * q2 * q2 - 28 * q2 + 4
    off = 5 * q2 + 2
    return Surd(off, -1, rad, Fraction(4)), Surd(off, 1, rad, Fraction(4))


def empty_tally_threshold(q1: Fraction, q2: Fraction) -> Fraction:
    """Cost above which a waiting voter abstains at ``<0,0>`` (needs ``q1 < 1``)."""
    return (2 * q1 + q2 - 2) / (2 * (q1 - 1))


def never_vote_dominance_bound(q1: Fraction, q2: Fraction) -> Fraction:
    """Cost above which waiting beats voting early when ``p2_00 = 0``."""
    return (1 - q1) / (2 - Fraction(3, 2) * q1 - q2)


def always_vote_dominance_bound(q1: Fraction, q2: Fraction) -> Fraction:
    """Cost above which waiting beats voting early when ``p2_00 = 1``."""
    return (1 - q1) / (1 - q1 / 2 - q2)


@dataclass(frozen=True)
class CostInterval:
    lower: Fraction
    upper: Fraction
    lower_closed: bool
    upper_closed: bool
    #: True when ``(q1, q2)`` sits exactly on one of the bracket ends.
    on_boundary: bool = False
    #: For the never-vote family, which ``(q1, q2)`` branch supplied the bound.
    branch: int | None = None

    def contains(self, cost) -> bool:
        cost = _f(cost)
        above = cost >= self.lower if self.lower_closed else cost > self.lower
        below = cost <= self.upper if self.upper_closed else cost < self.upper
        return above and below

    def is_interior(self, cost) -> bool:
        cost = _f(cost)
        return self.lower < cost < self.upper

    @property
    def empty(self) -> bool:
        if self.lower_closed and self.upper_closed:
            return self.lower > self.upper
        return self.lower >= self.upper

    def __str__(self) -> str:
        return f"{'[' if self.lower_closed else '('}{self.lower}, {self.upper}{']' if self.upper_closed else ')'}"


#: Bracket conventions used for membership, one row per bound.
ENDPOINTS = (
    {"regime": "never_vote", "branch": 1, "variable": "q1", "lower": "0", "lower_closed": False,
     "upper": "zero_region_roots(q2)[0]", "upper_closed": False},
    {"regime": "never_vote", "branch": 1, "variable": "q2", "lower": "0", "lower_closed": True,
     "upper": "2 - sqrt(2)", "upper_closed": False},
    {"regime": "never_vote", "branch": 1, "variable": "cost", "lower": "empty_tally_threshold",
     "lower_closed": True, "upper": "1", "upper_closed": False},
    {"regime": "never_vote", "branch": 2, "variable": "q1", "lower": "zero_region_roots(q2)[0]",
     "lower_closed": True, "upper": "zero_region_roots(q2)[1]", "upper_closed": True},
    {"regime": "never_vote", "branch": 2, "variable": "q2", "lower": "0", "lower_closed": True,
     "upper": "1", "upper_closed": True},
    {"regime": "never_vote", "branch": 2, "variable": "cost", "lower": "never_vote_dominance_bound",
     "lower_closed": False, "upper": "1", "upper_closed": False},
    {"regime": "always_vote", "branch": None, "variable": "q1", "lower": "one_region_roots(q2)[0]",
     "lower_closed": False, "upper": "one_region_roots(q2)[1]", "upper_closed": False},
    {"regime": "always_vote", "branch": None, "variable": "q2", "lower": "0", "lower_closed": True,
     "upper": "(14 - 4 sqrt(2)) / 41", "upper_closed": False},
    {"regime": "always_vote", "branch": None, "variable": "cost", "lower": "always_vote_dominance_bound",
     "lower_closed": False, "upper": "empty_tally_threshold", "upper_closed": False},
)


def _check_simplex(q1: Fraction, q2: Fraction):
    if q1 <= 0 or q2 < 0 or q1 + q2 > 1:
        raise ValueError(f"need q1 > 0, q2 >= 0 and q1 + q2 <= 1, got ({q1}, {q2})")


def feasible_ptp_zero(q1, q2) -> CostInterval | None:
    """Costs at which waiting, then abstaining at ``<0,0>``, is an equilibrium.

    Returns ``None`` if ``(q1, q2)`` lies in neither branch or the cost range
    there is empty.
    """
    q1, q2 = _f(q1), _f(q2)
    _check_simplex(q1, q2)
    low_root, high_root = zero_region_roots(q2)
    below_low = low_root.compare(q1)
    above_high = high_root.compare(q1)
    if below_low < 0:
        if SQRT2_GAP.compare(q2) >= 0 or q1 >= 1:
            return None
        lower, branch, edge = empty_tally_threshold(q1, q2), 1, False
    elif above_high <= 0:
        lower, branch = never_vote_dominance_bound(q1, q2), 2
        edge = below_low == 0 or above_high == 0
    else:
        return None
    # At the dominance bound early voting and waiting pay the same, so waiting no
    # longer dominates strictly; the empty-tally bound of branch 1 keeps it.
    iv = CostInterval(lower, ONE, branch == 1, False, on_boundary=edge, branch=branch)
    return None if iv.empty else iv


def feasible_ptp_one(q1, q2) -> CostInterval | None:
    """Costs at which waiting, then voting at ``<0,0>``, is an equilibrium."""
    q1, q2 = _f(q1), _f(q2)
    _check_simplex(q1, q2)
    if ONE_REGION_Q2_CAP.compare(q2) >= 0:
        return None
    low_root, high_root = one_region_roots(q2)
    if not low_root.real:
        return None
    if low_root.compare(q1) <= 0 or high_root.compare(q1) >= 0 or q1 >= 1:
        return None
    iv = CostInterval(always_vote_dominance_bound(q1, q2), empty_tally_threshold(q1, q2), False, False)
    return None if iv.empty else iv


def on_open_boundary_ptp_one(q1, q2) -> bool:
    """Whether ``(q1, q2)`` sits exactly on an excluded end of the always-vote bracket."""
    q1, q2 = _f(q1), _f(q2)
    low_root, high_root = one_region_roots(q2)
    if not low_root.real or ONE_REGION_Q2_CAP.compare(q2) >= 0:
        return False
    return low_root.compare(q1) == 0 or high_root.compare(q1) == 0


__all__ = [
    "CostInterval", "ENDPOINTS", "ONE_REGION_Q2_CAP", "SQRT2_GAP", "Surd",
    "always_vote_dominance_bound", "empty_tally_threshold", "feasible_ptp_one",
    "feasible_ptp_zero", "never_vote_dominance_bound", "on_open_boundary_ptp_one",
    "one_region_roots", "zero_region_roots",
]
