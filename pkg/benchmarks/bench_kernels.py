"""Compare the compiled and pure-Python kernels on the package's real workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row times one kernel call on inputs built the same way the library
builds them, checks that both backends return the same answer, and prints
the speedup.
"""
import argparse
import random
import time

import numpy as np

from oddred import kernels
from oddred.bimodular import build_bimodular_system
from oddred.graphs import complete_graph, doubled_graph
from oddred.labels import cubic_graphs, reduce_maxcut_to_separation
from oddred.oddcycle import CInducedSpec, build_c_induced, odd_cycle_table
from oddred.solver import random_instance


def _workloads(quick):
    n = 7 if quick else 9
    table = odd_cycle_table(complete_graph(n))
    coeffs, rhs, _ = build_c_induced(CInducedSpec.standard(n)).integral()
    w = np.array(coeffs, dtype=np.int64)
    tight = table.incidence[table.values(build_c_induced(CInducedSpec.standard(n)))[0] == rhs]
    yield f"bareiss_rank: tight cycles, K_{n}", "bareiss_rank", (np.ascontiguousarray(tight),)
    yield f"cycle_weights: {len(table)} odd cycles of K_{n}", "cycle_weights", (table.flat, table.offsets, w)

    a = build_bimodular_system(doubled_graph(complete_graph(3))).as_array()
    yield "minor_values: doubled K_3 system, 6x6", "minor_values", (a, 6)

    g = cubic_graphs(6 if quick else 8)[0]
    inst = reduce_maxcut_to_separation(g, 5)
    h = inst.graph
    scale = 2 * (len(g.edges) - 5 + 1)
    weights = np.array([int(x * scale) for x in inst.x], dtype=np.int64)
    args = (h.n, np.array([u for u, _ in h.edges], dtype=np.int32), np.array([v for _, v in h.edges], dtype=np.int32),
            np.array(h.red_vector, dtype=np.uint8), weights, scale, (h.n // 2) % 2, 0, 1 << h.n, False)
    yield f"scan_labelings: {h.n}-vertex reduction instance", "scan_labelings", args

    rng = random.Random(7)
    side = 8 if quick else 12
    while True:
        inst = random_instance(rng, max_side=side)
        left, right = inst.graph.bipartition
        if len(left) == len(right) == side:
            break
    ridx = {v: j for j, v in enumerate(right)}
    lidx = {v: i for i, v in enumerate(left)}
    adj = np.zeros(side, dtype=np.uint64)
    red = np.zeros(side, dtype=np.uint64)
    for u, v in inst.edges:
        bit = np.uint64(1) << np.uint64(ridx[v])
        adj[lidx[u]] |= bit
        if inst.is_red((u, v)):
            red[lidx[u]] |= bit
    yield f"pm_parity_counts: {side}+{side} random graph", "pm_parity_counts", (side, side, adj, red)


def _time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def _same(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args()
    if kernels.compiled_backend is None:
        print("compiled backend not available; build the extension to compare")
        return 1
    print(f"{'workload':48} {'python':>10} {'cython':>10} {'speedup':>8}")
    for label, name, fargs in _workloads(args.quick):
        tp, rp = _time(getattr(kernels.python_backend, name), fargs, args.repeat)
        tc, rc = _time(getattr(kernels.compiled_backend, name), fargs, args.repeat)
        flag = "" if _same(rp, rc) else "  MISMATCH"
        print(f"{label:48} {tp:9.4f}s {tc:9.4f}s {tp / max(tc, 1e-9):7.1f}x{flag}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
