#!/usr/bin/env python3
"""Benchmark the compiled kernel lane against the pure-numpy fallback.

Times the three hot kernels on random inputs plus one end-to-end pipeline
(restricted multiplication norms of the shifted-circle moment matrix,
which exercises the exact pre-reduction and a full sweep of Hermitian
eigensolves).  Run after building the extension:

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from sobspec import kernels
from sobspec.exact_linalg import companion_matrix


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


def _random_hpd(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g @ g.conj().T + n * np.eye(n)


def kernel_cases(rng):
    cases = []
    for n in (30, 60, 120):
        h = _random_hermitian(rng, n)
        cases.append((f"jacobi_eigvals n={n}",
                      lambda h=h: kernels.jacobi_eigvals(h)))
    for deg in (40, 80):
        roots = rng.standard_normal(deg) + 1j * rng.standard_normal(deg)
        coeffs = list(np.poly(roots)[::-1])
        comp = kernels.balance(companion_matrix(coeffs))
        cases.append((f"hessenberg_eigvals deg={deg}",
                      lambda c=comp: kernels.hessenberg_eigvals(c)))
    for n in (100, 200):
        a = _random_hpd(rng, n)
        cases.append((f"cholesky_lower n={n}",
                      lambda a=a: kernels.cholesky_lower(a)))
    return cases


def pipeline_case():
    from sobspec.diagnostics import multnorm_sequence
    from sobspec.measures import Circle
    from sobspec.scalars import RationalComplex
    from sobspec.sources import MeasureSource

    src = MeasureSource(Circle(RationalComplex(1), 1))
    return ("multnorm shifted-circle n<=40",
            lambda: multnorm_sequence(src, (0, 40)))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    lanes = kernels.available_backends()
    if "compiled" not in lanes:
        print("note: compiled lane not built; benchmarking pure lane only")

    rng = np.random.default_rng(0)
    cases = kernel_cases(rng) + [pipeline_case()]

    width = max(len(name) for name, _ in cases)
    header = f"{'case':<{width}}  " + "".join(f"{lane:>12}" for lane in lanes)
    if len(lanes) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn in cases:
        times = {}
        for lane in lanes:
            kernels.set_backend(lane)
            times[lane] = _time(fn, args.repeat)
        row = f"{name:<{width}}  " + "".join(
            f"{times[lane] * 1e3:>10.2f}ms" for lane in lanes
        )
        if len(lanes) == 2:
            row += f"{times['pure'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
