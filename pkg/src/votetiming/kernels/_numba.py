"""Compiled loops. Mirrors ``_numpy`` line for line; keep the two in sync."""

import numpy as np
from numba import njit


@njit(cache=True)
def _tally_index(vf, va):
    return 3 * vf + va


@njit(cache=True)
def _winner(vf, va, coin):
    if vf > va:
        return 0
    if va > vf:
        return 1
    return 0 if coin < 0.5 else 1


@njit(cache=True)
def playout_codes(u, p):
    n = u.shape[0]
    out = np.empty(n, dtype=np.int64)
    q1 = p[0]
    q12 = p[0] + p[1]
    for r in range(n):
        if u[r, 0] < q1:
            arrival = 0
        elif u[r, 0] < q12:
            arrival = 1
        else:
            arrival = 2
        vf = 0
        va = 0
        early_for = u[r, 1] < 0.5
        if arrival == 0:
            if early_for:
                vf += 1
            else:
                va += 1
        f_early = u[r, 2] < p[2]
        a_early = u[r, 3] < p[3]
        if f_early:
            vf += 1
        if a_early:
            va += 1
        k = _tally_index(vf, va)
        fs = 0
        if not f_early:
            fs = 1 if u[r, 4] < p[4 + k] else 2
        as_ = 0
        if not a_early:
            as_ = 1 if u[r, 5] < p[13 + k] else 2
        ff = vf + (1 if fs == 1 else 0)
        fa = va + (1 if as_ == 1 else 0)
        if arrival == 0:
            us = 0 if early_for else 1
        elif arrival == 1:
            if vf > va:
                late_for = True
            elif va > vf:
                late_for = False
            else:
                late_for = u[r, 6] < 0.5
            if late_for:
                ff += 1
                us = 2
            else:
                fa += 1
                us = 3
        else:
            us = 4
        w = _winner(ff, fa, u[r, 7])
        out[r] = ((us * 3 + fs) * 3 + as_) * 2 + w
    return out


@njit(cache=True)
def late_bloomer_grid(ii, jj, n):
    m = ii.shape[0]
    out = np.zeros((m, 9), dtype=np.int64)
    for r in range(m):
        i = ii[r]
        j = jj[r]
        if i <= 0 or j < 0 or i + j > n:
            continue
        # vote-certain regime
        t = 14 * n - 41 * j
        q2_ok = t > 0 and 32 * n * n < t * t
        y = 4 * i - 5 * j - 2 * n
        disc = 41 * j * j - 28 * j * n + 4 * n * n
        lo_num = 2 * (n - i)
        lo_den = 2 * n - i - 2 * j
        hi_num = 2 * n - 2 * i - j
        hi_den = 2 * (n - i)
        if q2_ok and disc >= 0:
            if y * y < disc:
                if i < n and lo_den > 0 and lo_num * hi_den < hi_num * lo_den:
                    out[r, 0] = 1
                    out[r, 1] = lo_num
                    out[r, 2] = lo_den
                    out[r, 3] = hi_num
                    out[r, 4] = hi_den
            elif y * y == disc:
                out[r, 0] = 3
        # vote-never regime
        y = 4 * i - 6 * n + 7 * j
        disc = 33 * j * j - 20 * j * n + 4 * n * n
        s = 2 * n - j
        q2_first = s > 0 and 2 * n * n < s * s
        status = 0
        branch = 0
        if y < 0 and y * y > disc:
            if q2_first and i < n:
                branch = 1
                status = 1
        elif y * y <= disc:
            branch = 2
            status = 2 if y * y == disc else 1
        if branch == 1:
            num = 2 * n - 2 * i - j
            den = 2 * (n - i)
        else:
            num = 2 * (n - i)
            den = 4 * n - 3 * i - 2 * j
        if status > 0 and num < den:
            out[r, 5] = status
            out[r, 6] = num
            out[r, 7] = den
            out[r, 8] = branch
    return out
