"""Wall-clock comparison of the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--playouts N] [--grid N] [--repeat R]

Each kernel is run once untimed (so numba compiles outside the measurement),
then ``repeat`` times; the best time is reported. Outputs of the two backends
are compared element for element before any number is printed.
"""

import argparse
import time
from fractions import Fraction

import numpy as np

from votetiming.game import GameParams, StrategyProfile, kernel_inputs
from votetiming.kernels import late_bloomer_grid, playout_codes
from votetiming.regimes import simplex_blocks


def best_of(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--playouts", type=int, default=1_000_000)
    ap.add_argument("--grid", type=int, default=1000, help="grid denominator for the waiting-regime map")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    params = GameParams(Fraction(1, 2), Fraction(43, 64), Fraction(169, 768))
    profile = StrategyProfile(Fraction(3, 4), Fraction(107, 252), Fraction(0), Fraction(1, 2))
    probs = kernel_inputs(profile, params)
    u = np.random.default_rng(7).random((args.playouts, 8))

    blocks = list(simplex_blocks(Fraction(1, args.grid)))

    def grid(backend):
        return [late_bloomer_grid(i, j, n, backend) for i, j, n in blocks]

    a, b = playout_codes(u, probs, "numba"), playout_codes(u, probs, "numpy")
    assert np.array_equal(a, b), "playout backends disagree"
    for x, y in zip(grid("numba"), grid("numpy")):
        assert np.array_equal(x, y), "grid backends disagree"

    print(f"{'kernel':<22}{'size':>12}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for name, size, run in (
        ("playout_codes", args.playouts, lambda be: playout_codes(u, probs, be)),
        ("late_bloomer_grid", sum(len(i) for i, _, _ in blocks), grid),
    ):
        t_nb = best_of(lambda: run("numba"), args.repeat)
        t_np = best_of(lambda: run("numpy"), args.repeat)
        print(f"{name:<22}{size:>12}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
