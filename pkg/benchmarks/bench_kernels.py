"""Time the compiled walk kernel against the pure-Python fallback.

Runs a fixed number of walk steps (no early stop) on a few graphs and
reports steps per second for every available backend, plus one full
limiting-distribution run per graph.

    python benchmarks/bench_kernels.py [--steps 2000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from szcommunity import walk
from szcommunity.generators import barbell
from szcommunity.graph import build_graph, directed_edge_space
from szcommunity.io import load_dataset


def road_like(n=1039, m=1305, seed=0):
    """Sparse connected graph with the size of the Euroroad core."""
    rng = np.random.default_rng(seed)
    edges = {(int(rng.integers(v)), v) for v in range(1, n)}
    while len(edges) < m:
        u, v = sorted(int(x) for x in rng.integers(n, size=2))
        if u != v:
            edges.add((u, v))
    return build_graph(n, sorted(edges))


def fixed_steps(g, backend, steps):
    space = directed_edge_space(g)
    op = walk.build_szegedy_operator(space, walk.transition_probabilities(space, g.degrees))
    psi = walk.initial_state_max_degree(g, space).real.reshape(1, -1).copy()
    acc = psi[0] ** 2
    kernel = walk.BACKENDS[backend]
    indptr = op.indptr.astype(np.longlong)
    indices = op.indices.astype(np.longlong)
    trace = np.empty((0, g.m))
    start = time.perf_counter()
    # eps = 0 never fires, so exactly `steps` steps run
    kernel.advance(indptr, indices, op.data, psi, acc, 0, steps, 0.0, g.m, True, trace)
    return time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    graphs = {
        "barbell(2,5)": barbell(2, 5),
        "karate": load_dataset("karate"),
        "lesmis": load_dataset("lesmis"),
        "road-like 1039/1305": road_like(),
    }
    backends = walk.available_backends()
    print(f"backends: {', '.join(backends)}; {args.steps} steps, best of {args.repeat}")
    header = f"{'graph':<22}{'2m':>6}" + "".join(f"{b + ' steps/s':>20}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, g in graphs.items():
        rates = []
        for b in backends:
            best = min(fixed_steps(g, b, args.steps) for _ in range(args.repeat))
            rates.append(args.steps / best)
        line = f"{name:<22}{2 * g.m:>6}" + "".join(f"{r:>20,.0f}" for r in rates)
        if len(rates) == 2:
            line += f"{rates[0] / rates[1]:>9.1f}x"
        print(line)

    print()
    print(f"{'full run (eps=1e-4)':<22}{'T':>6}" + "".join(f"{b + ' seconds':>20}" for b in backends))
    for name, g in graphs.items():
        times = []
        for b in backends:
            start = time.perf_counter()
            out = walk.run_walk(g, backend=b)
            times.append(time.perf_counter() - start)
        print(f"{name:<22}{out.steps:>6}" + "".join(f"{t:>20.4f}" for t in times))


if __name__ == "__main__":
    main()
