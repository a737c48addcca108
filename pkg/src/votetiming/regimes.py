"""Parameter sweeps, regime labels and the averaged cost thresholds."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import closed_form as cf
from .equilibrium import (
    RegimeLabel,
    SolvedProfile,
    late_bloomer_candidate,
    solve_late_bloomer,
    solve_mixed,
    solve_q1_zero,
    verify_wpbe,
)
from .feasibility import CostInterval, feasible_ptp_one, feasible_ptp_zero
from .game import PROFILE_FIELDS, GameParams
from .kernels import late_bloomer_grid
from .rational import ONE, ZERO, as_rational

LATE_BLOOMER_LABELS = (RegimeLabel.LATE_BLOOMER_P00_ZERO, RegimeLabel.LATE_BLOOMER_P00_ONE)


class EmptyRegion(ValueError):
    """No grid point of the requested regime is feasible."""


def solve_all(params: GameParams) -> list[SolvedProfile]:
    """Every characterised equilibrium at ``params``."""
    if params.q1 == 0:
        return solve_q1_zero(params)
    found = []
    lb = solve_late_bloomer(params)
    if lb is not None:
        found.append(lb)
    found.extend(solve_mixed(params))
    return found


def classify(params: GameParams) -> frozenset[RegimeLabel]:
    labels = frozenset().union(*(s.labels for s in solve_all(params)))
    return labels or frozenset({RegimeLabel.UNCLASSIFIED})


# --- grids ----------------------------------------------------------------------


def _step_parts(grid_step) -> tuple[int, int]:
    step = as_rational(grid_step)
    if step <= 0 or step > 1:
        raise ValueError(f"grid step must lie in (0, 1], got {step}")
    return step.numerator, step.denominator


def simplex_blocks(grid_step, block: int = 1 << 18) -> Iterator[tuple[np.ndarray, np.ndarray, int]]:
    """Integer grid ``(i, j, n)`` with ``q1 = i/n > 0``, ``q2 = j/n >= 0``, ``q1 + q2 <= 1``.

    Yields blocks in lexicographic ``(q1, q2)`` order so memory stays bounded
    however fine the grid is.
    """
    a, n = _step_parts(grid_step)
    ks = np.arange(1, n // a + 1, dtype=np.int64)
    rows_i, rows_j, size = [], [], 0
    for k in ks:
        i = k * a
        j = np.arange(0, n - i + 1, a, dtype=np.int64)
        rows_i.append(np.full(j.shape, i, dtype=np.int64))
        rows_j.append(j)
        size += j.size
        if size >= block:
            yield np.concatenate(rows_i), np.concatenate(rows_j), n
            rows_i, rows_j, size = [], [], 0
    if size:
        yield np.concatenate(rows_i), np.concatenate(rows_j), n


_REGIME_COLUMNS = {
    RegimeLabel.LATE_BLOOMER_P00_ONE: (0, 1, 2),
    RegimeLabel.LATE_BLOOMER_P00_ZERO: (5, 6, 7),
}


def average_threshold(regime: RegimeLabel, grid_step, backend: str | None = None) -> float:
    """Mean lower cost bound of a waiting regime over its feasible ``(q1, q2)`` grid points.

    Every grid point with ``q1 > 0`` and ``q1 + q2 <= 1`` whose cost interval is
    non-empty counts once. Membership is exact. Only the final mean is a float.
    """
    if regime not in _REGIME_COLUMNS:
        raise ValueError(f"no averaged threshold for {regime.value}")
    status_col, num_col, den_col = _REGIME_COLUMNS[regime]
    total, count = 0.0, 0
    for i, j, n in simplex_blocks(grid_step):
        g = late_bloomer_grid(i, j, n, backend)
        hit = (g[:, status_col] == 1) | (g[:, status_col] == 2)
        total += float(np.sum(g[hit, num_col] / g[hit, den_col]))
        count += int(hit.sum())
    if not count:
        raise EmptyRegion(f"no feasible grid point for {regime.value}")
    return total / count


# --- sweeps ---------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    """A box of ``(cost, q1, q2)`` sampled at multiples of ``grid_step``.

    Ranges are closed. Points violating ``cost < 1`` or ``q1 + q2 <= 1`` are
    dropped silently, so the default box covers the whole parameter space.
    """

    grid_step: Fraction
    cost_range: tuple[Fraction, Fraction] = (ZERO, ONE)
    q1_range: tuple[Fraction, Fraction] = (ZERO, ONE)
    q2_range: tuple[Fraction, Fraction] = (ZERO, ONE)
    outputs: tuple[str, ...] = ("labels", "profiles", "u_diff", "verdict", "late_bloomer")
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "grid_step", as_rational(self.grid_step))
        if self.grid_step <= 0:
            raise ValueError("grid_step must be positive")
        for name in ("cost_range", "q1_range", "q2_range"):
            lo, hi = (as_rational(v) for v in getattr(self, name))
            object.__setattr__(self, name, (lo, hi))
        unknown = set(self.outputs) - set(SWEEP_OUTPUTS)
        if unknown:
            raise ValueError(f"unknown sweep outputs {sorted(unknown)}")

    def _axis(self, lo: Fraction, hi: Fraction, cap: Fraction) -> list[Fraction]:
        lo, hi = max(lo, ZERO), min(hi, cap)
        if lo > hi:
            return []
        step = self.grid_step
        k = -(-lo // step) if lo > 0 else 0
        out = []
        while k * step <= hi:
            out.append(k * step)
            k += 1
        return out

    def points(self) -> Iterator[GameParams]:
        for c in self._axis(*self.cost_range, ONE):
            if c >= 1:
                continue
            for q1 in self._axis(*self.q1_range, ONE):
                for q2 in self._axis(*self.q2_range, ONE - q1):
                    yield GameParams(c, q1, q2)


SWEEP_OUTPUTS = ("labels", "profiles", "u_diff", "verdict", "late_bloomer")


@dataclass
class SweepTable:
    columns: list[str]
    rows: list[dict] = field(default_factory=list)


def _profile_text(solved: SolvedProfile) -> str:
    return "(" + " ".join(str(getattr(solved.profile, k)) for k in PROFILE_FIELDS) + ")"


def _interval_text(iv: CostInterval | None) -> str:
    return "" if iv is None else str(iv)


def sweep_row(params: GameParams, outputs=SWEEP_OUTPUTS) -> dict:
    """Everything the sweep records about one grid point (rationals stay Fractions)."""
    row: dict = {"cost": params.cost, "q1": params.q1, "q2": params.q2}
    solved = solve_all(params)
    if "labels" in outputs:
        labels = sorted({label.value for s in solved for label in s.labels}) or [RegimeLabel.UNCLASSIFIED.value]
        row["labels"] = "|".join(labels)
    if "profiles" in outputs:
        row["profiles"] = ";".join(_profile_text(s) for s in solved)
        row["indifferent"] = ";".join(",".join(sorted(s.indifferent)) for s in solved)
    if "u_diff" in outputs:
        row["u_diff"] = ";".join(str(cf.u_diff(params, s.profile)) for s in solved)
    if "verdict" in outputs:
        row["verdict"] = ";".join(verify_wpbe(s.profile, params).verdict.value for s in solved)
    if "late_bloomer" in outputs:
        row.update(late_bloomer_facts(params))
    return row


def late_bloomer_facts(params: GameParams) -> dict:
    """Feasibility interval, waiting advantage and verdict of both waiting candidates.

    Both facts sit side by side so that "inside the interval implies a valid
    equilibrium where waiting wins" can be checked row by row.
    """
    facts = {}
    for tag, p00, finder in (("lb_zero", ZERO, feasible_ptp_zero), ("lb_one", ONE, feasible_ptp_one)):
        if params.q1 == 0:
            facts.update({f"{tag}_interval": "", f"{tag}_inside": "", f"{tag}_u_diff": None,
                          f"{tag}_verdict": ""})
            continue
        iv = finder(params.q1, params.q2)
        cand = late_bloomer_candidate(params, p00)
        facts[f"{tag}_interval"] = _interval_text(iv)
        facts[f"{tag}_inside"] = "yes" if iv is not None and iv.contains(params.cost) else "no"
        facts[f"{tag}_u_diff"] = cf.u_diff(params, cand)
        facts[f"{tag}_verdict"] = verify_wpbe(cand, params).verdict.value
    return facts


def sweep_columns(outputs=SWEEP_OUTPUTS) -> list[str]:
    cols = ["cost", "q1", "q2"]
    if "labels" in outputs:
        cols.append("labels")
    if "profiles" in outputs:
        cols += ["profiles", "indifferent"]
    if "u_diff" in outputs:
        cols.append("u_diff")
    if "verdict" in outputs:
        cols.append("verdict")
    if "late_bloomer" in outputs:
        for tag in ("lb_zero", "lb_one"):
            cols += [f"{tag}_interval", f"{tag}_inside", f"{tag}_u_diff", f"{tag}_verdict"]
    return cols


def _row_for(args):
    params, outputs = args
    return sweep_row(params, outputs)


def sweep(spec: SweepSpec) -> SweepTable:
    """Evaluate every grid point of ``spec``; rows come out in ``(cost, q1, q2)`` order
    whatever the worker count."""
    table = SweepTable(sweep_columns(spec.outputs))
    jobs = [(p, spec.outputs) for p in spec.points()]
    if spec.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            table.rows = list(pool.map(_row_for, jobs, chunksize=64))
    else:
        table.rows = [_row_for(job) for job in jobs]
    return table


# --- figure presets ---------------------------------------------------------------


def q1_zero_figure(grid_step) -> SweepTable:
    """Band structure over ``(cost, q2)`` when the uninformed voter never comes early."""
    spec = SweepSpec(grid_step, q1_range=(ZERO, ZERO))
    cols = ["cost", "q2", "labels", "p1", "p2_00", "p2_01", "p2_10", "indifferent"]
    table = SweepTable(cols)
    for params in spec.points():
        (solved,) = solve_q1_zero(params)
        prof = solved.profile
        table.rows.append({
            "cost": params.cost, "q2": params.q2,
            "labels": "|".join(sorted(label.value for label in solved.labels)),
            "p1": prof.p1, "p2_00": prof.p2_00, "p2_01": prof.p2_01, "p2_10": prof.p2_10,
            "indifferent": ",".join(sorted(solved.indifferent)),
        })
    return table


def _reduced(num: np.ndarray, den: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g = np.gcd(num, den)
    g[g == 0] = 1
    return num // g, den // g


def late_bloomer_figure(grid_step, backend: str | None = None) -> SweepTable:
    """Waiting-regime map over ``(q1, q2)``: one row per point inside either regime.

    Bounds are exact reduced fractions. Status ``2`` marks a point that sits on
    a closed bracket end.
    """
    cols = ["q1", "q2", "one_status", "one_lower", "one_upper", "zero_status", "zero_lower", "zero_branch"]
    table = SweepTable(cols)
    for i, j, n in simplex_blocks(grid_step):
        g = late_bloomer_grid(i, j, n, backend)
        keep = np.isin(g[:, 0], (1, 2)) | np.isin(g[:, 5], (1, 2))
        if not keep.any():
            continue
        g, ii, jj = g[keep], i[keep], j[keep]
        q1n, q1d = _reduced(ii, np.full_like(ii, n))
        q2n, q2d = _reduced(jj, np.full_like(jj, n))
        lo1n, lo1d = _reduced(g[:, 1], g[:, 2])
        hi1n, hi1d = _reduced(g[:, 3], g[:, 4])
        lo0n, lo0d = _reduced(g[:, 6], g[:, 7])
        for r in range(g.shape[0]):
            one = g[r, 0] in (1, 2)
            zero = g[r, 5] in (1, 2)
            table.rows.append({
                "q1": Fraction(int(q1n[r]), int(q1d[r])),
                "q2": Fraction(int(q2n[r]), int(q2d[r])),
                "one_status": int(g[r, 0]),
                "one_lower": Fraction(int(lo1n[r]), int(lo1d[r])) if one else None,
                "one_upper": Fraction(int(hi1n[r]), int(hi1d[r])) if one else None,
                "zero_status": int(g[r, 5]),
                "zero_lower": Fraction(int(lo0n[r]), int(lo0d[r])) if zero else None,
                "zero_branch": int(g[r, 8]) if zero else None,
            })
    return table


def late_bloomer_summary(grid_step, backend: str | None = None) -> dict:
    return {
        "grid_step": as_rational(grid_step),
        "average_lower_cost_p00_one": average_threshold(RegimeLabel.LATE_BLOOMER_P00_ONE, grid_step, backend),
        "average_lower_cost_p00_zero": average_threshold(RegimeLabel.LATE_BLOOMER_P00_ZERO, grid_step, backend),
        "averaging": "mean of the lower cost bound over feasible (q1, q2) grid points with q1 > 0, q1 + q2 <= 1",
    }


__all__ = [
    "EmptyRegion", "LATE_BLOOMER_LABELS", "RegimeLabel", "SWEEP_OUTPUTS", "SweepSpec", "SweepTable",
    "average_threshold", "classify", "late_bloomer_facts", "late_bloomer_figure",
    "late_bloomer_summary", "q1_zero_figure", "simplex_blocks", "solve_all", "sweep",
    "sweep_columns", "sweep_row",
]
