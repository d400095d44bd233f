"""Benchmark the simplex kernels: compiled extension vs NumPy fallback.

Builds annual dispatch problems at increasing horizons and times the
embedded solver with each kernel implementation (plus the HiGHS adapter as
an external reference point). Run from the repo root:

    python benchmarks/bench_simplex.py [--horizons 24 72 168] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from h2stack import (CapacityFactorSeries, ElectrolyzerSpec, GridTerms, PpaTerms,
                     StorageTerms, bol_sec_curve, build_envelope, build_problem,
                     constant_demand)
from h2stack.lp import kernels, solve_lp


def dispatch_instance(horizon: int, n_points: int = 5):
    rng = np.random.default_rng(horizon)
    spec = ElectrolyzerSpec(p_nom_kw=1000.0, sec_nominal=52.5,
                            partload_gain=0.01, n_points=n_points)
    envelope = build_envelope(spec, bol_sec_curve(spec))
    sources = [
        PpaTerms("onshore", 0.0729,
                 CapacityFactorSeries("onshore", rng.uniform(0.3, 1.0, horizon))),
        PpaTerms("solar", 0.0555,
                 CapacityFactorSeries("solar", rng.uniform(0.0, 0.9, horizon))),
    ]
    storage = StorageTerms(capacity_fee_eur_per_kg_a=1.0, usage_fee_eur_per_kg=0.36)
    problem = build_problem(sources, storage, GridTerms(),
                            constant_demand(8.0, horizon), envelope, horizon)
    return problem.instance


def use_kernel(name: str) -> None:
    impl = kernels.get_kernel(name)
    kernels.choose_entering = impl.choose_entering
    kernels.ratio_test = impl.ratio_test
    kernels.pivot_update = impl.pivot_update


def time_solve(instance, repeat: int, backend: str | None = None) -> tuple[float, int]:
    best = float("inf")
    iterations = 0
    for _ in range(repeat):
        start = time.perf_counter()
        solution = solve_lp(instance, backend=backend)
        best = min(best, time.perf_counter() - start)
        iterations = solution.iterations
        assert solution.is_optimal, solution.status
    return best, iterations


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--horizons", type=int, nargs="+", default=[24, 72, 168])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--skip-highs", action="store_true")
    args = parser.parse_args()

    kernel_names = ["python"]
    try:
        kernels.get_kernel("cython")
        kernel_names.insert(0, "cython")
    except ImportError:
        print("compiled kernel unavailable; benchmarking the fallback only")

    header = f"{'horizon':>8} {'rows':>7} {'kernel':>8} {'time_s':>9} {'iters':>7} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for horizon in args.horizons:
        instance = dispatch_instance(horizon)
        rows = instance.n_eq + instance.n_le
        times: dict[str, float] = {}
        iters: dict[str, int] = {}
        for name in kernel_names:
            use_kernel(name)
            times[name], iters[name] = time_solve(instance, args.repeat)
        if not args.skip_highs:
            use_kernel(kernel_names[0])
            times["highs"], iters["highs"] = time_solve(instance, args.repeat,
                                                        backend="highs")
        for name, elapsed in times.items():
            speedup = ""
            if name != "python" and "python" in times:
                speedup = f"{times['python'] / elapsed:8.2f}x"
            print(f"{horizon:>8} {rows:>7} {name:>8} {elapsed:>9.3f} "
                  f"{iters[name]:>7} {speedup:>9}")
    use_kernel(kernel_names[0])


if __name__ == "__main__":
    main()
