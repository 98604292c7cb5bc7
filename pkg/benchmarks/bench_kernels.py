"""Time the potential-grid kernel: compiled extension vs pure Python.

Run from the repository root:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import random
import time
from array import array

from mppf._kernels import BACKEND
from mppf._kernels import pure as pure_mod

try:
    from mppf._kernels import _core as core_mod
except ImportError:
    core_mod = None


def make_case(n_candidates: int, n_points: int, seed: int):
    rng = random.Random(seed)
    cpos = array("d", (rng.uniform(0, 100) for _ in range(3 * n_candidates)))
    cvel = array("d", (rng.uniform(-0.5, 0.5) for _ in range(3 * n_candidates)))
    opos = array("d", (rng.uniform(0, 100) for _ in range(3 * n_points)))
    ovel = array("d", (rng.uniform(-0.3, 0.3) for _ in range(3 * n_points)))
    oinf = array("d", (rng.uniform(5, 20) for _ in range(n_points)))
    out = array("d", bytes(8 * n_candidates))
    return cpos, cvel, opos, ovel, oinf, out


def bench(fn, case, n_candidates, n_points, repeats=2000):
    cpos, cvel, opos, ovel, oinf, out = case
    args = (n_candidates, cpos, cvel, 80.0, 80.0, 10.0,
            n_points, opos, ovel, oinf, 0.05, -0.02, 0.0,
            0.1, 10.0, 0.1, 0.1, 0.349065850398866, True, out)
    fn(*args)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    dt = time.perf_counter() - t0
    return dt / repeats * 1e6  # microseconds per call


def main() -> None:
    print(f"active backend: {BACKEND}")
    shapes = [(25, 9), (25, 100), (25, 400)]
    header = f"{'candidates x points':>20} {'pure (us)':>12} {'compiled (us)':>14} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n_c, n_p in shapes:
        case = make_case(n_c, n_p, seed=n_c * 1000 + n_p)
        t_pure = bench(pure_mod.total_potential_grid, case, n_c, n_p)
        if core_mod is not None:
            t_core = bench(core_mod.total_potential_grid, case, n_c, n_p)
            print(f"{f'{n_c} x {n_p}':>20} {t_pure:>12.1f} {t_core:>14.1f} "
                  f"{t_pure / t_core:>7.1f}x")
        else:
            print(f"{f'{n_c} x {n_p}':>20} {t_pure:>12.1f} {'n/a':>14} {'n/a':>8}")


if __name__ == "__main__":
    main()
