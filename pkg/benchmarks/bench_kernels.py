#!/usr/bin/env python3
"""Timing comparison of the compiled and numpy kernel flavours.

Usage: python benchmarks/bench_kernels.py [--repeats N] [--seed S]

The numba flavour is timed only when numba imports and
DIVPROTECT_NO_NUMBA is unset; compilation happens during warmup so the
table reflects steady state. The end-to-end row times a full plan and
failure sweep of the largest bundled fixture in two subprocesses, one
per flavour, so the import-time kernel selection applies to each.
"""
import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from divprotect import kernels
from divprotect.topology import Topology


def random_graph(rng, n: int, extra: int) -> Topology:
    perm = [int(v) for v in rng.permutation(n)]
    edges = set()
    for i in range(n):
        a, b = perm[i], perm[(i + 1) % n]
        edges.add((min(a, b), max(a, b)))
    cap = n * (n - 1) // 2
    while len(edges) < min(cap, n + extra):
        a, b = (int(v) for v in rng.integers(0, n, size=2))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    rows = [(a, b, int(rng.integers(1, 50))) for a, b in sorted(edges)]
    return Topology.from_edge_list(rows)


def bench(fn, calls, repeats: int) -> tuple[float, float]:
    for args in calls:  # warmup; first numba call compiles here
        fn(*args)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for args in calls:
            fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), statistics.mean(times)


def end_to_end_s(no_numba: bool) -> float:
    code = (
        "import time\n"
        "from divprotect.cli import fixture_path\n"
        "from divprotect.topology import load_scenario\n"
        "from divprotect.coding import algorithm_one\n"
        "from divprotect.failsim import sweep\n"
        "sc = load_scenario(open(fixture_path('uslong-reconstruction')).read())\n"
        "algorithm_one(sc.topology, sc.demands)  # warmup\n"
        "t0 = time.perf_counter()\n"
        "for _ in range(5):\n"
        "    plan = algorithm_one(sc.topology, sc.demands)\n"
        "    sweep(sc.topology, plan)\n"
        "print((time.perf_counter() - t0) / 5)\n"
    )
    env = dict(os.environ)
    if no_numba:
        env["DIVPROTECT_NO_NUMBA"] = "1"
    else:
        env.pop("DIVPROTECT_NO_NUMBA", None)
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    return float(out.stdout.strip())


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    graphs = [random_graph(rng, n, extra) for n in (20, 60, 120) for extra in (n,)]
    dij_calls = [
        (t.adj_indptr, t.adj_node, t.adj_link, t.link_mm, 0,
         np.zeros(t.m, dtype=np.uint8))
        for t in graphs
        for _ in range(10)
    ]
    mats = [
        np.ascontiguousarray(rng.integers(0, 2, size=(r, c), dtype=np.uint8))
        for r, c in ((24, 32), (64, 96), (128, 192))
        for _ in range(10)
    ]
    gf2_calls = [(m,) for m in mats]

    flavours = [("numpy", kernels._dijkstra_numpy, kernels._gf2_rank_numpy)]
    if kernels.NUMBA_ENABLED:
        flavours.insert(0, ("numba", kernels._dijkstra_jit, kernels._gf2_rank_jit))
    else:
        print("numba flavour unavailable (DIVPROTECT_NO_NUMBA set or not installed)")

    rows = []
    for name, dij, gf2 in flavours:
        best, mean = bench(dij, dij_calls, args.repeats)
        rows.append(("dijkstra", name, best, mean))
        best, mean = bench(gf2, gf2_calls, args.repeats)
        rows.append(("gf2_rank", name, best, mean))
    if not args.skip_end_to_end:
        rows.append(("plan+sweep", "numba", end_to_end_s(False), float("nan")))
        rows.append(("plan+sweep", "numpy", end_to_end_s(True), float("nan")))

    print(f"{'kernel':<12}{'flavour':<9}{'best ms':>10}{'mean ms':>10}{'rel speed':>10}")
    base: dict = {}
    for kernel, name, best, mean in rows:
        base.setdefault(kernel, best)
        rel = base[kernel] / best if best else float("nan")
        print(
            f"{kernel:<12}{name:<9}{best * 1e3:>10.3f}{mean * 1e3:>10.3f}{rel:>10.2f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
