"""Compare the numba and numpy versions of the two hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

The numba timings exclude the first (compiling) call.
"""
import argparse
import time

import numpy as np

from fracbessel import kernels
from fracbessel.delsarte import jacobi_rule, translation_constant
from fracbessel.grids import default_grid
from fracbessel.special import gamma


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_jv(repeat):
    z = np.linspace(0.0, 80.0, 200_000)
    rows = []
    for alpha in (-0.4, 0.25, 3.5):
        g = gamma(alpha + 1.0)
        a = kernels.jv_scaled_numpy(alpha, z, g)
        b = kernels.jv_scaled_numba(alpha, z, g)
        diff = float(np.max(np.abs(a - b)))
        tn = best_of(lambda: kernels.jv_scaled_numpy(alpha, z, g), repeat)
        tj = best_of(lambda: kernels.jv_scaled_numba(alpha, z, g), repeat)
        rows.append((f"jv_scaled alpha={alpha}", tn, tj, diff))
    return rows


def bench_translation(repeat):
    rows = []
    for nodes in (32, 64):
        ax = default_grid(1, nodes=nodes).axes[0]
        mu = 0.25
        t, om = jacobi_rule(mu, 48)
        args = (ax.nodes, t, om, ax.param_nodes, ax.bary, ax.L, 1.0 / ax.stretch, translation_constant(mu))
        a = kernels.translation_tensor_numpy(*args)
        b = kernels.translation_tensor_numba(*args)
        diff = float(np.max(np.abs(a - b)))
        tn = best_of(lambda: kernels.translation_tensor_numpy(*args), repeat)
        tj = best_of(lambda: kernels.translation_tensor_numba(*args), repeat)
        rows.append((f"translation_tensor nodes={nodes}", tn, tj, diff))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    print(f"{'kernel':36s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, tn, tj, diff in bench_jv(args.repeat) + bench_translation(args.repeat):
        print(f"{name:36s} {tn:10.4f} {tj:10.4f} {tn / tj:8.1f} {diff:10.1e}")


if __name__ == "__main__":
    main()
