"""Compare the numba and numpy closure kernels.

    python3 benchmarks/bench_closure.py --ns 6-10 --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from minpauli import _kernels
from minpauli.closure import closure
from minpauli.gensets import builtin_genset


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", default="6-10")
    ap.add_argument("--families", default="example1,example2,standard")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    lo, _, hi = args.ns.partition("-")
    ns = range(int(lo), int(hi or lo) + 1)
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    _kernels.set_backend("numba")
    closure(builtin_genset("prop1"))  # compile outside the timings

    print(f"{'family':<10} {'N':>3} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  same")
    for fam in args.families.split(","):
        for n in ns:
            gs = builtin_genset(fam, n)
            _kernels.set_backend("numba")
            t_nb, a = _time(lambda: closure(gs).dist, args.repeat)
            _kernels.set_backend("numpy")
            t_np, b = _time(lambda: closure(gs).dist, args.repeat)
            same = np.array_equal(a, b)
            print(f"{fam:<10} {n:>3} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>8.1f}  {same}")
    _kernels.set_backend("numba")

    rows = np.sort(np.random.default_rng(0).random((5000, 15)).argsort(axis=1)[:, :4] + 1, axis=1)
    for name in ("numba", "numpy"):
        _kernels.set_backend(name)
        t, _ = _time(lambda: _kernels.batch_universal(rows, 2), args.repeat)
        print(f"batch_universal N=2, 5000 subsets, {name}: {t:.4f} s")
    _kernels.set_backend("numba")


if __name__ == "__main__":
    main()
