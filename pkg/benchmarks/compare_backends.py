"""Benchmark the compiled Mittag-Leffler core against the pure-Python one.

Both cores expose the same three entry points (ml_eval, ml_eval_many,
gamma_real), so this script times them side by side on the workloads the
library actually runs: scalar kernel pairs along a trajectory, a large
vectorized batch of kernel arguments, and tight gamma loops. It also
reports the worst disagreement between the two cores on each workload,
so a speedup never hides a numerical regression.

Run from the repository root after an editable install:

    python3 benchmarks/compare_backends.py
    python3 benchmarks/compare_backends.py --points 400 --repeats 5
"""

from __future__ import annotations

import argparse
import cmath
import math
import time

import numpy as np

from ftjc import _mlpure

try:
    from ftjc import _mlcore
except ImportError:
    _mlcore = None

TOL = 1e-11


def trajectory_args(alpha: float, points: int) -> np.ndarray:
    """Kernel arguments exp(i pi a / 2) * mu sqrt(n+1) t^a along one ray."""
    rot = cmath.exp(0.5j * math.pi * alpha)
    ts = np.linspace(1e-3, 12.0, points)
    return rot * (1.0 * math.sqrt(2.0) * ts ** alpha)


def best_of(repeats: int, fn) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def scalar_workload(core, zs_by_alpha):
    def run():
        for alpha, zs in zs_by_alpha:
            for z in zs:
                core.ml_eval(alpha, z, TOL)
                core.ml_eval(alpha, -z, TOL)
    return run


def vector_workload(core, zs_by_alpha):
    def run():
        for alpha, zs in zs_by_alpha:
            core.ml_eval_many(alpha, zs, TOL)
            core.ml_eval_many(alpha, -zs, TOL)
    return run


def gamma_workload(core, xs):
    def run():
        for x in xs:
            core.gamma_real(x)
    return run


def disagreement(zs_by_alpha) -> float:
    worst = 0.0
    for alpha, zs in zs_by_alpha:
        va, _, _ = _mlcore.ml_eval_many(alpha, zs, TOL)
        vb, _, _ = _mlpure.ml_eval_many(alpha, zs, TOL)
        scale = np.maximum(np.abs(va), 1.0)
        worst = max(worst, float(np.max(np.abs(va - vb) / scale)))
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=250,
                        help="trajectory points per fractional order")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats, the best one is reported")
    args = parser.parse_args(argv)

    if _mlcore is None:
        print("compiled core is not built; nothing to compare")
        return 1

    alphas = (0.25, 0.5, 0.75, 0.9, 1.0)
    zs_by_alpha = [(a, trajectory_args(a, args.points)) for a in alphas]
    scalar_lists = [(a, [complex(z) for z in zs]) for a, zs in zs_by_alpha]
    xs = [0.5 + 0.01 * k for k in range(2000)]

    calls = 2 * args.points * len(alphas)
    rows = [
        ("scalar kernel pairs", calls,
         scalar_workload(_mlcore, scalar_lists),
         scalar_workload(_mlpure, scalar_lists)),
        ("vectorized batches", calls,
         vector_workload(_mlcore, zs_by_alpha),
         vector_workload(_mlpure, zs_by_alpha)),
        ("gamma_real loop", len(xs),
         gamma_workload(_mlcore, xs),
         gamma_workload(_mlpure, xs)),
    ]

    print(f"{'workload':<22} {'calls':>7} {'compiled':>12} {'pure':>12} "
          f"{'speedup':>8}")
    for label, n, fast, slow in rows:
        tc = best_of(args.repeats, fast)
        tp = best_of(args.repeats, slow)
        print(f"{label:<22} {n:>7d} {tc * 1e3:>10.2f}ms {tp * 1e3:>10.2f}ms "
              f"{tp / tc:>7.1f}x")

    print(f"\nworst relative disagreement on the batch workload: "
          f"{disagreement(zs_by_alpha):.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
