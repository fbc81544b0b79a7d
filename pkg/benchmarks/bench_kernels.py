#!/usr/bin/env python
"""Numba vs numpy backends for the subset scans and the power recursion.

    python benchmarks/bench_kernels.py [--repeat 3] [--vertices 20]

Each case is run once per backend to warm up (numba compiles on first
call, cached afterwards), then timed; the two results must agree.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from slashgraph import _kernels
from slashgraph.graph import diamond_graph, make_graph, oslash_power
from slashgraph.isoperimetry import min_iso_ratio, min_iso_ratio_power
from slashgraph.measures import geodesic_metric, power_edge_measure, power_metric, standard_metric, uniform_edge_measure


def random_connected(n: int, extra: int, seed: int):
    rng = random.Random(seed)
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    while len(edges) < n - 1 + extra:
        u, v = sorted(rng.sample(range(n), 2))
        edges.add((u, v))
    g = make_graph(n, sorted(edges))
    return g, uniform_edge_measure(g), geodesic_metric(g, [1] * g.n_edges)


def diamond_power(k: int, m: int, n: int):
    base = diamond_graph(k, m)
    g = oslash_power(base, n)
    return g, power_edge_measure(uniform_edge_measure(base), g), power_metric(standard_metric(base), g)


def cases(vertices: int):
    g, nu, d = diamond_power(2, 2, 2)
    yield "exhaustive D22^2 (12 vertices)", lambda b: min_iso_ratio(g, 2, nu, d, backend=b).min_ratio
    rg, rnu, rd = random_connected(vertices, vertices // 2, seed=0)
    yield (
        f"exhaustive random graph ({vertices} vertices)",
        lambda b: min_iso_ratio(rg, 2, rnu, rd, backend=b).min_ratio,
    )
    base = diamond_graph(3, 3)
    bnu, bd = uniform_edge_measure(base), standard_metric(base)
    yield "power recursion D33^3", lambda b: min_iso_ratio_power(base, 3, 2, bnu, bd, backend=b).min_ratio
    rng = np.random.default_rng(0)
    a = rng.integers(0, 10**6, 4000)
    c = rng.integers(0, 10**6, 4000)
    yield "min-plus convolution 4000 x 4000", lambda b: int(_kernels.minplus_convolve(a, c, b)[0].sum())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--vertices", type=int, default=20)
    args = ap.parse_args()
    backends = ["numba", "numpy"] if _kernels.HAVE_NUMBA else ["numpy"]
    print(f"{'case':<42}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, run in cases(args.vertices):
        best, results = {}, {}
        for b in backends:
            results[b] = run(b)
            times = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                run(b)
                times.append(time.perf_counter() - t0)
            best[b] = min(times)
        if len(set(results.values())) != 1:
            raise SystemExit(f"backends disagree on {name}: {results}")
        speedup = best["numpy"] / best["numba"] if "numba" in best else float("nan")
        print(f"{name:<42}" + "".join(f"{best[b]:>11.4f}s" for b in backends) + f"{speedup:>9.1f}x")


if __name__ == "__main__":
    main()
