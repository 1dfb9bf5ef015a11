"""Time the compiled and pure-Python kernels on identical inputs.

    python benchmarks/bench_kernels.py [--repeat N] [--pulses N]
"""

import argparse
import time

import numpy as np

from hompath import AnalyzerConfig, DelayConfig, QuadratureSpec, default_source
from hompath import _backend
from hompath.engine import coincidence_grid
from hompath.montecarlo import outcome_probabilities


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--pulses", type=int, default=1 << 20)
    args = ap.parse_args(argv)

    p = default_source(pump_phase=0.7)
    d = DelayConfig(120.0, 668.0, 660.0)
    a = AnalyzerConfig.from_degrees(45, 45)
    grid = coincidence_grid(p, d, QuadratureSpec())
    u = np.random.default_rng(0).random((6, args.pulses))
    cum = tuple(np.cumsum(outcome_probabilities(0.6))[:3])
    trans = (1.0, 1.0, 0.9, 0.9)
    n_points = grid[0].size * grid[4].size

    rows = []
    for name in _backend.available():
        k = _backend.get(name)
        t_quad = best_of(lambda: k.coincidence_sums(p, d, a, *grid), args.repeat)
        t_mc = best_of(lambda: k.mc_tally(u, 0.05, cum, trans, 0.01, 0.01), args.repeat)
        rows.append((name, t_quad, t_mc))

    print(f"quadrature: {n_points} density evaluations per call; Monte Carlo: {args.pulses} pulses per call")
    print(f"{'backend':<8} {'coincidence_sums':>18} {'mc_tally':>12}")
    for name, tq, tm in rows:
        print(f"{name:<8} {tq * 1e3:>15.2f} ms {tm * 1e3:>9.2f} ms")
    if len(rows) == 2:
        (_, q0, m0), (_, q1, m1) = sorted(rows, key=lambda r: r[0] != "python")
        print(f"speedup  {q0 / q1:>17.1f}x {m0 / m1:>11.1f}x")
    else:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
