"""Vectorised fallbacks with the same contract as the compiled loops."""

import numpy as np


def playout_codes(u, p):
    u0, u1, u2, u3, u4, u5, u6, u7 = (u[:, k] for k in range(8))
    arrival = np.where(u0 < p[0], 0, np.where(u0 < p[0] + p[1], 1, 2))
    early_for = u1 < 0.5
    f_early = u2 < p[2]
    a_early = u3 < p[3]
    vf = f_early.astype(np.int64) + ((arrival == 0) & early_for)
    va = a_early.astype(np.int64) + ((arrival == 0) & ~early_for)
    k = 3 * vf + va
    fs = np.where(f_early, 0, np.where(u4 < p[4 + k], 1, 2))
    as_ = np.where(a_early, 0, np.where(u5 < p[13 + k], 1, 2))
    late_for = np.where(vf > va, True, np.where(va > vf, False, u6 < 0.5))
    late = arrival == 1
    ff = vf + (fs == 1) + (late & late_for)
    fa = va + (as_ == 1) + (late & ~late_for)
    us = np.where(arrival == 0, np.where(early_for, 0, 1),
                  np.where(late, np.where(late_for, 2, 3), 4))
    w = np.where(ff > fa, 0, np.where(fa > ff, 1, np.where(u7 < 0.5, 0, 1)))
    return (((us * 3 + fs) * 3 + as_) * 2 + w).astype(np.int64)


def late_bloomer_grid(ii, jj, n):
    i, j = ii, jj
    out = np.zeros((i.shape[0], 9), dtype=np.int64)
    valid = (i > 0) & (j >= 0) & (i + j <= n)

    t = 14 * n - 41 * j
    q2_ok = (t > 0) & (32 * n * n < t * t)
    y = 4 * i - 5 * j - 2 * n
    disc = 41 * j * j - 28 * j * n + 4 * n * n
    lo_num, lo_den = 2 * (n - i), 2 * n - i - 2 * j
    hi_num, hi_den = 2 * n - 2 * i - j, 2 * (n - i)
    gate = valid & q2_ok & (disc >= 0)
    inside = gate & (i < n) & (lo_den > 0) & (y * y < disc) & (lo_num * hi_den < hi_num * lo_den)
    edge = gate & (y * y == disc)
    out[:, 0] = np.where(inside, 1, np.where(edge, 3, 0))
    for col, arr in ((1, lo_num), (2, lo_den), (3, hi_num), (4, hi_den)):
        out[:, col] = np.where(inside, arr, 0)

    y = 4 * i - 6 * n + 7 * j
    disc = 33 * j * j - 20 * j * n + 4 * n * n
    s = 2 * n - j
    q2_first = (s > 0) & (2 * n * n < s * s)
    below = (y < 0) & (y * y > disc)
    first = below & q2_first & (i < n)
    second = ~below & (y * y <= disc)
    status = np.where(first, 1, np.where(second, np.where(y * y == disc, 2, 1), 0))
    num = np.where(first, 2 * n - 2 * i - j, 2 * (n - i))
    den = np.where(first, 2 * (n - i), 4 * n - 3 * i - 2 * j)
    keep = valid & (status > 0) & (num < den)
    out[:, 5] = np.where(keep, status, 0)
    out[:, 6] = np.where(keep, num, 0)
    out[:, 7] = np.where(keep, den, 0)
    out[:, 8] = np.where(keep, np.where(first, 1, 2), 0)
    return out
