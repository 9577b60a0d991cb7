"""Compare the compiled and NumPy simplex kernels.

Usage: python benchmarks/bench_simplex.py [--repeat 5]

Two workloads: random dense LPs solved by the two-phase method, and a
cutting-plane solve of the portfolio benchmark.  Each line reports the
best wall time per kernel, the speed-up, and whether the two kernels
returned bit-identical solutions.
"""
import argparse
import time

import numpy as np

from scaledsa.harness.benchmarks import portfolio_instance
from scaledsa.scenario import SampleSizePlan, build_problem
from scaledsa.solver import LinearProgram, ext_available, kernel, solve_cutting_plane, solve_lp


def random_lp(rows, cols, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(rows, cols))
    x0 = rng.uniform(0, 1, cols)
    b = A @ x0 + rng.uniform(0, 1, rows)
    return LinearProgram(rng.normal(size=cols), A, b, np.zeros(cols), np.full(cols, 10.0))


def best_time(fn, repeat):
    best, out = np.inf, None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not ext_available():
        print("compiled kernel not built; only the NumPy kernel is available")
        return
    kp, ke = kernel("python"), kernel("ext")

    print(f"{'workload':<28}{'numpy [s]':>12}{'compiled [s]':>14}{'speed-up':>10}  identical")
    for rows, cols in [(50, 10), (200, 20), (400, 40)]:
        lp = random_lp(rows, cols, 0)
        tp, rp = best_time(lambda: solve_lp(lp, kp), args.repeat)
        te, re = best_time(lambda: solve_lp(lp, ke), args.repeat)
        same = np.array_equal(rp.x_star, re.x_star)
        print(f"{f'lp {rows}x{cols}':<28}{tp:>12.4f}{te:>14.4f}{tp / te:>10.1f}  {same}")

    inst = portfolio_instance(0, verify=False)
    for s_alpha in (1.0, 1.2):
        s = s_alpha ** (1 / inst.alpha)
        plan = SampleSizePlan.make(1e-3, 0.01, inst.n, s, inst.alpha)
        prob = build_problem(inst.objective, inst.constraint, plan, inst.gamma, inst.x_set, inst.box, 0,
                             sense=inst.sense, distribution=inst.distribution)
        tp, rp = best_time(lambda: solve_cutting_plane(prob, kern=kp), args.repeat)
        te, re = best_time(lambda: solve_cutting_plane(prob, kern=ke), args.repeat)
        same = np.array_equal(rp.x_star, re.x_star)
        name = f"kelley portfolio N={plan.N}"
        print(f"{name:<28}{tp:>12.4f}{te:>14.4f}{tp / te:>10.1f}  {same}")


if __name__ == "__main__":
    main()
