"""Seeded Monte Carlo playouts, checked against exact path probabilities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .game import PATH_CODES, GameParams, StrategyProfile, enumerate_outcomes, kernel_inputs, path_label
from .kernels import playout_codes

CHUNK = 1 << 18


def simulate_counts(
    profile: StrategyProfile,
    params: GameParams,
    playouts: int,
    seed: int,
    backend: str | None = None,
) -> np.ndarray:
    """Histogram of path codes over ``playouts`` games.

    Uniforms are drawn in fixed-size chunks from ``numpy.random.default_rng(seed)``,
    so the result depends only on ``seed`` and ``playouts``, never on the backend.
    """
    if playouts < 0:
        raise ValueError("playouts must be non-negative")
    rng = np.random.default_rng(seed)
    probs = kernel_inputs(profile, params)
    counts = np.zeros(PATH_CODES, dtype=np.int64)
    left = playouts
    while left:
        m = min(left, CHUNK)
        codes = playout_codes(rng.random((m, 8)), probs, backend)
        counts += np.bincount(codes, minlength=PATH_CODES)
        left -= m
    return counts


@dataclass(frozen=True)
class PathTally:
    code: int
    label: str
    count: int
    exact: Fraction
    sigma: float
    playouts: int

    @property
    def z(self) -> float:
        """Standardised gap between observed and expected counts (0 when sigma is 0)."""
        expected = self.exact * self.playouts
        if self.sigma == 0:
            return 0.0 if self.count == expected else float("inf")
        return (self.count - float(expected)) / self.sigma


def compare_with_enumeration(profile: StrategyProfile, params: GameParams, counts: np.ndarray) -> list[PathTally]:
    """Pair each path's observed count with its exact probability and binomial sigma."""
    n = int(counts.sum())
    exact = {}
    for outcome in enumerate_outcomes(profile, params):
        exact[outcome.path.code] = exact.get(outcome.path.code, Fraction(0)) + outcome.probability
    rows = []
    for code in sorted(set(exact) | set(np.flatnonzero(counts).tolist())):
        p = exact.get(code, Fraction(0))
        sigma = sqrt(n * float(p) * (1 - float(p)))
        rows.append(PathTally(code, path_label(code), int(counts[code]), p, sigma, n))
    return rows


__all__ = ["CHUNK", "PathTally", "compare_with_enumeration", "simulate_counts"]
