"""Acceptance suite, one test group per numbered criterion.

Tolerances are fixed targets and are not loosened. Criteria that the
implementation cannot meet are left failing on purpose; the terminal summary
prints one line per criterion.
"""

from __future__ import annotations

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from gen import random_params, random_profile
from votetiming import closed_form as cf
from votetiming.equilibrium import RegimeLabel, late_bloomer_candidate, solve_q1_zero, verify_wpbe
from votetiming.feasibility import feasible_ptp_one, feasible_ptp_zero
from votetiming.game import (
    GREEN,
    MUSTARD,
    TURN_ONE,
    WHITE,
    GameParams,
    InformedAction,
    StrategyProfile,
    evaluate_conditional,
)
from votetiming.regimes import average_threshold
from votetiming.simulate import compare_with_enumeration, simulate_counts

F = Fraction
VOTE, WAIT, ABSTAIN = InformedAction.VOTE, InformedAction.WAIT, InformedAction.ABSTAIN
NUDGE = F(1, 1000)

GOLDEN_PARAMS = GameParams(F(1, 2), F(43, 64), F(169, 768))
GOLDEN_PROFILE = StrategyProfile(F(3, 4), F(107, 252), F(0), F(1, 2))


def criterion(n, title):
    return pytest.mark.criterion(str(n), title=title)


# --- 1 ---------------------------------------------------------------------------


@criterion(1, "closed-form turn-1 payoffs equal tree evaluation on 1000 random pairs")
def test_closed_forms_match_tree_on_random_pairs():
    rng = random.Random(20240601)
    start = time.perf_counter()
    mismatches = []
    for _ in range(1000):
        params, profile = random_params(rng), random_profile(rng)
        early = evaluate_conditional(profile, params, TURN_ONE, VOTE)
        wait = evaluate_conditional(profile, params, TURN_ONE, WAIT)
        if cf.u_early(params, profile) != early or cf.u_wait(params, profile) != wait:
            mismatches.append((params, profile))
    elapsed = time.perf_counter() - start
    assert not mismatches, mismatches[:3]
    assert elapsed < 10, f"{elapsed:.1f} s"


# --- 2 ---------------------------------------------------------------------------


def _feasible_grid():
    for i in range(20):
        for j in range(20):
            q1, q2 = F(i, 20), F(j, 20)
            if q1 + q2 <= 1:
                yield q1, q2


def _vote_minus_abstain(profile, params, info_set):
    vote = evaluate_conditional(profile, params, info_set, VOTE)
    abstain = evaluate_conditional(profile, params, info_set, ABSTAIN)
    return vote - abstain


def _check_threshold(threshold, q1, q2, profile, info_set, failures):
    if threshold is None or not 0 <= threshold < 1:
        return 0
    at = _vote_minus_abstain(profile, GameParams(threshold, q1, q2), info_set)
    if at != 0:
        failures.append(("at", info_set.name, q1, q2, profile, at))
    if threshold - NUDGE >= 0:
        below = _vote_minus_abstain(profile, GameParams(threshold - NUDGE, q1, q2), info_set)
        if not below > 0:
            failures.append(("below", info_set.name, q1, q2, profile, below))
    if threshold + NUDGE < 1:
        above = _vote_minus_abstain(profile, GameParams(threshold + NUDGE, q1, q2), info_set)
        if not above < 0:
            failures.append(("above", info_set.name, q1, q2, profile, above))
    return 1


@criterion(2, "vote/abstain indifference exactly at each threshold, strict dominance at +-1/1000")
def test_mustard_threshold_indifference():
    failures, checked = [], 0
    profile = StrategyProfile(F(1, 3), F(1, 2), F(1, 4), F(2, 3))
    for q1, q2 in _feasible_grid():
        t = cf.mustard_threshold(GameParams(0, q1, q2))
        checked += _check_threshold(t, q1, q2, profile, MUSTARD, failures)
    assert checked > 100
    assert not failures, failures[:3]


@criterion(2, "vote/abstain indifference exactly at each threshold, strict dominance at +-1/1000")
def test_green_threshold_indifference():
    failures, checked = [], 0
    rates = [F(k, 4) for k in range(5)]
    for q1, q2 in _feasible_grid():
        for p1 in rates:
            for p2_10 in rates:
                t = cf.green_threshold(GameParams(0, q1, q2), p1, p2_10)
                profile = StrategyProfile(p1, F(1, 2), p2_10, F(1, 3))
                checked += _check_threshold(t, q1, q2, profile, GREEN, failures)
    assert checked > 1000
    assert not failures, failures[:3]


@criterion(2, "vote/abstain indifference exactly at each threshold, strict dominance at +-1/1000")
def test_white_threshold_indifference():
    failures, checked = [], 0
    for q1, q2 in _feasible_grid():
        if q1 == 0:
            continue
        for p2_01 in (F(1, 5), F(1, 2), F(9, 10)):
            profile = StrategyProfile(F(2, 5), F(1, 2), F(1, 2), p2_01)
            checked += _check_threshold(p2_01, q1, q2, profile, WHITE, failures)
    assert checked > 500
    assert not failures, failures[:3]


# --- 3 ---------------------------------------------------------------------------


def _expected_q1_zero(c, q2):
    """Piecewise table for q1 = 0, written out independently of the solver."""
    trailing, empty = 1 - q2, 1 - q2 / 2
    p01 = F(1) if c <= trailing else F(0)
    p00 = F(1) if c <= empty else F(0)
    bands = set()
    if c <= trailing:
        bands.add(RegimeLabel.Q1_ZERO_LOW_COST)
    if q2 > 0 and trailing <= c <= empty:
        bands.add(RegimeLabel.Q1_ZERO_MID_COST)
    if c >= empty:
        bands.add(RegimeLabel.Q1_ZERO_HIGH_COST)
    return StrategyProfile(F(1), p00, F(0), p01), frozenset(bands)


@criterion(3, "q1 = 0 solver matches the piecewise table on a 1/100 grid and verifies")
def test_q1_zero_table():
    mismatches, invalid = [], []
    for k in range(100):
        for j in range(101):
            params = GameParams(F(k, 100), F(0), F(j, 100))
            (solved,) = solve_q1_zero(params)
            profile, bands = _expected_q1_zero(params.cost, params.q2)
            if solved.profile != profile or solved.labels != bands:
                mismatches.append((params, solved))
            if not verify_wpbe(solved.profile, params).is_valid:
                invalid.append(params)
    assert not mismatches, mismatches[:3]
    assert not invalid, invalid[:3]


# --- 4 ---------------------------------------------------------------------------


@criterion(4, "reference mixed-timing point verifies with zero gain at every on-path set")
def test_golden_point_is_equilibrium():
    report = verify_wpbe(GOLDEN_PROFILE, GOLDEN_PARAMS)
    gains = {row.info_set.name: row.gain for row in report.per_set if row.on_path}
    assert report.is_valid, f"verdict {report.verdict.value}, gains {gains}"
    assert all(g == 0 for g in gains.values()), gains


# --- 5 ---------------------------------------------------------------------------


def _succeeds(params, p2_00):
    profile = late_bloomer_candidate(params, p2_00)
    return cf.u_diff(params, profile) < 0 and verify_wpbe(profile, params).is_valid


@criterion(5, "late-bloomer regions: valid inside, disjoint, failing just outside (< 60 s)")
def test_late_bloomer_regions():
    start = time.perf_counter()
    inside = overlap = 0
    bad_inside, bad_overlap, bad_outside = [], [], []
    for i in range(1, 101):
        for j in range(0, 101 - i):
            q1, q2 = F(i, 100), F(j, 100)
            regions = ((feasible_ptp_zero(q1, q2), F(0)), (feasible_ptp_one(q1, q2), F(1)))
            for k in range(100):
                c = F(k, 100)
                hits = [(iv, p00) for iv, p00 in regions if iv is not None and iv.contains(c)]
                if len(hits) > 1:
                    overlap += 1
                    bad_overlap.append((c, q1, q2))
                for _, p00 in hits:
                    inside += 1
                    if not _succeeds(GameParams(c, q1, q2), p00):
                        bad_inside.append((c, q1, q2, p00))
            for iv, p00 in regions:
                if iv is None:
                    continue
                for c in (iv.lower - NUDGE, iv.upper + NUDGE):
                    if 0 <= c < 1 and not iv.contains(c) and _succeeds(GameParams(c, q1, q2), p00):
                        bad_outside.append((c, q1, q2, p00))
    elapsed = time.perf_counter() - start
    assert inside > 10_000
    assert not bad_inside, (len(bad_inside), bad_inside[:3])
    assert not bad_overlap, (overlap, bad_overlap[:3])
    assert not bad_outside, (len(bad_outside), bad_outside[:3])
    assert elapsed < 60, f"{elapsed:.1f} s"


# --- 6 ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "regime, target",
    [(RegimeLabel.LATE_BLOOMER_P00_ONE, 0.57), (RegimeLabel.LATE_BLOOMER_P00_ZERO, 0.76)],
    ids=["p00_one", "p00_zero"],
)
@criterion(6, "average lower cost thresholds near 0.57 / 0.76, drift < 0.01 on refinement (< 60 s)")
def test_average_thresholds(regime, target):
    start = time.perf_counter()
    coarse = average_threshold(regime, F(1, 1000))
    fine = average_threshold(regime, F(1, 2000))
    elapsed = time.perf_counter() - start
    assert abs(coarse - fine) < 0.01, (coarse, fine)
    assert elapsed < 60, f"{elapsed:.1f} s"
    assert abs(coarse - target) <= 0.05, f"average {coarse:.5f}, target {target} +- 0.05"


# --- 7 ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "params, profile",
    [
        (GOLDEN_PARAMS, GOLDEN_PROFILE),
        (GameParams(F(3, 4), F(2, 3), F(0)), late_bloomer_candidate(GameParams(F(3, 4), F(2, 3), F(0)), F(1))),
        (GameParams(F(1, 5), F(1, 4), F(1, 2)), StrategyProfile(F(1, 2), F(1, 3), F(2, 3), F(1, 4), F(3, 5), F(1, 7))),
        (GameParams(F(2, 5), F(0), F(3, 10)), StrategyProfile(F(1), F(1), F(0), F(1))),
    ],
    ids=["mixed", "late_bloomer", "arbitrary", "q1_zero"],
)
@criterion(7, "10^6 seeded playouts within 4 sigma of exact path probabilities")
def test_playouts_match_enumeration(params, profile):
    counts = simulate_counts(profile, params, 1_000_000, seed=12345)
    rows = compare_with_enumeration(profile, params, counts)
    assert sum(r.exact for r in rows) == 1
    for r in rows:
        if r.exact == 0:
            assert r.count == 0, r
        elif r.exact >= F(1, 1000):
            assert abs(r.z) <= 4, r


# --- 8 ---------------------------------------------------------------------------

CLI_CASES = [
    ["solve", "--cost", "3/4", "--q1", "2/3", "--q2", "0"],
    ["solve", "--cost", "1/5", "--q1", "0", "--q2", "1/2", "--format", "csv"],
    ["verify", "--cost", "1/2", "--q1", "43/64", "--q2", "169/768", "--p1", "3/4", "--p2-00", "107/252",
     "--p2-10", "0", "--p2-01", "1/2", "--check-off-path", "--format", "csv"],
    ["sweep", "--grid-step", "1/8", "--format", "csv"],
    ["simulate", "--cost", "1/2", "--q1", "1/4", "--q2", "1/4", "--p1", "1/2", "--p2-00", "1",
     "--p2-10", "0", "--p2-01", "1/2", "--playouts", "50000", "--seed", "3"],
    ["export-figure", "fig-qozero", "--grid-step", "1/20", "--format", "csv"],
    ["export-figure", "fig-latebird", "--grid-step", "1/50", "--format", "json"],
]


def _run_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "votetiming.cli", *args], cwd=cwd, capture_output=True)


@pytest.mark.parametrize("args", CLI_CASES, ids=lambda a: "-".join(a[:2]))
@criterion(8, "identical CLI invocations give byte-identical output")
def test_cli_is_deterministic(args, tmp_path):
    first, second = _run_cli(args, tmp_path), _run_cli(args, tmp_path)
    assert first.returncode == second.returncode
    assert first.returncode in (0, 2), first.stderr.decode()
    assert first.stdout and first.stdout == second.stdout
    assert first.stderr == second.stderr

    files = []
    for tag in ("a", "b"):
        out = tmp_path / tag / "result.out"
        out.parent.mkdir()
        _run_cli([*args, "--output", str(out)], tmp_path)
        files.append(sorted((p.name, p.read_bytes()) for p in out.parent.iterdir()))
    assert files[0] == files[1]
    assert files[0] and all(body for _, body in files[0])
