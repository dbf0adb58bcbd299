#!/usr/bin/env python3
"""Timing comparison of the compiled kernels vs the numpy fallback.

Run after building the extension:

    python benchmarks/bench_kernels.py [--sizes 500,1000,2000] [--dim 512]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from semproj.projection import backend
from semproj.projection.distances import knn_graph
from semproj.projection.types import DistanceMatrix


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(sizes: list[int], dim: int) -> None:
    impls = {name: backend.get_backend(name) for name in backend.available_backends()}
    if "compiled" not in impls:
        print("note: compiled extension not built; showing python only")

    header = f"{'kernel':<22}{'n':>6}" + "".join(f"{name:>14}" for name in impls) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    rng = np.random.Generator(np.random.PCG64(0))
    for n in sizes:
        X = np.ascontiguousarray(rng.normal(size=(n, dim)))
        Y = np.ascontiguousarray(rng.normal(size=(n, 2)))
        d2 = impls[next(iter(impls))].pairwise_sq_dists(X)
        d2 = np.ascontiguousarray(d2)
        P = np.ascontiguousarray(rng.random((n, n)))
        P = P / P.sum()
        D = DistanceMatrix(np.sqrt(d2))
        g = knn_graph(D, 10)

        cases = {
            "pairwise_sq_dists": lambda impl: impl.pairwise_sq_dists(X),
            "calibrate_bandwidths": lambda impl: impl.calibrate_bandwidths(
                d2, min(30.0, (n - 1) / 3), 1e-4, 50
            ),
            "tsne_grad_kl": lambda impl: impl.tsne_grad_kl(P, P, Y, True),
            "shortest_paths": lambda impl: impl.shortest_paths(
                g.indptr, g.indices, g.weights, n
            ),
        }
        for kernel, call in cases.items():
            times = {name: _time(lambda i=impl: call(i)) for name, impl in impls.items()}
            row = f"{kernel:<22}{n:>6}"
            for name in impls:
                row += f"{times[name] * 1000:>12.1f}ms"
            if "compiled" in times and "python" in times:
                row += f"{times['python'] / times['compiled']:>9.1f}x"
            print(row)
        print()


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="300,1000,2000")
    parser.add_argument("--dim", type=int, default=512)
    args = parser.parse_args()
    bench([int(s) for s in args.sizes.split(",")], args.dim)
