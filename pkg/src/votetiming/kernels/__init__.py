"""Hot loops with two interchangeable backends.

The numba backend is used when numba imports cleanly and the environment
variable ``VOTETIMING_DISABLE_NUMBA`` is unset or ``0``. Otherwise the pure
numpy versions run. Both backends take identical inputs and return identical
integer outputs, so the choice never changes results, only speed.
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy

try:
    from . import _numba
except ImportError:  # numba missing or broken on this platform
    _numba = None


def _env_disables_numba() -> bool:
    return os.environ.get("VOTETIMING_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


def default_backend() -> str:
    if _numba is None or _env_disables_numba():
        return "numpy"
    return "numba"


def _module(backend: str | None):
    backend = backend or default_backend()
    if backend == "numba":
        if _numba is None:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _numba
    if backend == "numpy":
        return _numpy
    raise ValueError(f"unknown backend {backend!r}")


def playout_codes(uniforms: np.ndarray, params: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Map rows of 8 uniforms to terminal path codes (see ``game.decode_path``)."""
    u = np.ascontiguousarray(uniforms, dtype=np.float64)
    if u.ndim != 2 or u.shape[1] != 8:
        raise ValueError("expected an (n, 8) array of uniforms")
    p = np.ascontiguousarray(params, dtype=np.float64)
    return _module(backend).playout_codes(u, p)


def late_bloomer_grid(i: np.ndarray, j: np.ndarray, n: int, backend: str | None = None) -> np.ndarray:
    """Classify grid points ``(q1, q2) = (i/n, j/n)`` for both waiting regimes.

    Returns an ``(m, 9)`` int64 array with columns

    ====  ==========================================================
    0     status of the regime where the empty-tally vote is certain
    1, 2  its lower cost bound as numerator, denominator
    3, 4  its upper cost bound as numerator, denominator
    5     status of the regime where the empty-tally vote never happens
    6, 7  its lower cost bound as numerator, denominator
    8     which of the two ``(q1, q2)`` branches produced column 6 (1 or 2)
    ====  ==========================================================

    A status is 0 (outside), 1 (inside), 2 (inside, sitting exactly on a
    closed ``(q1, q2)`` bracket) or 3 (outside, sitting exactly on an open one).
    Bounds are unreduced fractions, meaningful only for status 1 or 2. All
    comparisons against the irrational bracket ends are done by squaring in
    integer arithmetic, so they are exact.
    """
    ii = np.ascontiguousarray(i, dtype=np.int64)
    jj = np.ascontiguousarray(j, dtype=np.int64)
    if ii.shape != jj.shape or ii.ndim != 1:
        raise ValueError("i and j must be 1-d arrays of equal length")
    if n <= 0 or n > 1_000_000:
        raise ValueError("grid denominator must be in 1..10^6 to stay inside int64")
    return _module(backend).late_bloomer_grid(ii, jj, np.int64(n))


__all__ = ["default_backend", "late_bloomer_grid", "playout_codes"]
