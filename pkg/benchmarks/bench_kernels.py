#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python reference.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from scnforge.kernels import _ref

try:
    from scnforge.kernels import _native
except ImportError:
    _native = None


def timed(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_relax(impl, u0, kap, ds):
    u = u0.copy()
    impl.relax_speed_limits(u, kap, ds, 12.0)


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(3)

    n = 20_000
    u0 = rng.uniform(5.0, 35.0, n) ** 2
    kap = np.abs(rng.normal(0.0, 0.04, n))
    ds = rng.uniform(0.3, 0.7, n - 1)

    m = 200_000
    poly = rng.uniform(-50.0, 50.0, (64, 2))
    px = rng.uniform(-60.0, 60.0, m)
    py = rng.uniform(-60.0, 60.0, m)

    # Disjoint throughout so neither backend can exit early.
    t = 50_000
    base = np.array([[2.0, 1.0], [-2.0, 1.0], [-2.0, -1.0], [2.0, -1.0]])
    ca = np.repeat(base[None, :, :], t, axis=0)
    cb = ca + rng.uniform(4.05, 8.0, t)[:, None, None] * np.array([1.0, 0.0])
    ca = np.ascontiguousarray(ca)
    cb = np.ascontiguousarray(cb)

    cases = [
        (f"velocity relaxation ({n} stations)", lambda i: bench_relax(i, u0, kap, ds)),
        (f"point-in-polygon ({m} pts, 64-gon)", lambda i: i.points_in_polygon(px, py, poly)),
        (f"overlap scan ({t} steps)", lambda i: i.first_overlap_index(ca, cb)),
    ]

    print(f"{'kernel':<40} {'python':>10} {'native':>10} {'speedup':>8}")
    for name, fn in cases:
        t_ref = timed(lambda: fn(_ref), args.repeat)
        if _native is None:
            print(f"{name:<40} {t_ref * 1e3:>8.1f}ms {'n/a':>10} {'n/a':>8}")
            continue
        t_nat = timed(lambda: fn(_native), args.repeat)
        print(f"{name:<40} {t_ref * 1e3:>8.1f}ms {t_nat * 1e3:>8.1f}ms {t_ref / t_nat:>7.1f}x")


if __name__ == "__main__":
    main()
