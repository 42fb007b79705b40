"""Time the compiled and pure-Python graph kernels on random graphs.

Usage: python3 benchmarks/bench_kernels.py [--sizes 10 50 200] [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import time

from casegraph import kernels
from casegraph.graph import SimpleGraph


def random_graph(n: int, mean_degree: float, seed: int) -> SimpleGraph:
    rng = random.Random(seed)
    p = min(1.0, mean_degree / max(1, n - 1))
    ids = [f"v{i:05d}" for i in range(n)]
    edges = [(ids[i], ids[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return SimpleGraph.from_edges(ids, edges)


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 50, 200])
    parser.add_argument("--mean-degree", type=float, default=4.0)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the pure-Python timings are shown")
    names = ("all_pairs_distances", "brandes", "neighbor_links")
    print(f"{'n':>6} {'kernel':<20} " + " ".join(f"{b:>12}" for b in backends) + "   speedup")
    for n in args.sizes:
        _, indptr, indices = kernels.to_csr(random_graph(n, args.mean_degree, seed=n))
        for name in names:
            secs = {b: best_of(lambda m=mod: getattr(m, name)(indptr, indices), args.repeat)
                    for b, mod in backends.items()}
            cells = " ".join(f"{secs[b] * 1e3:10.3f}ms" for b in backends)
            speedup = f"{secs['python'] / secs['cython']:8.1f}x" if "cython" in secs else ""
            print(f"{n:>6} {name:<20} {cells} {speedup}")


if __name__ == "__main__":
    main()
