"""Two-level Infomap: greedy minimisation of the map equation.

For an undirected, unweighted graph without teleportation the stationary
visit rate of a node is ``deg / 2m`` and the exit rate of a module is the
weight of its boundary edges divided by ``2m``. The two-level code length is

    L = plogp(q) - 2 sum_i plogp(q_i) - sum_a plogp(p_a) + sum_i plogp(q_i + p_i)

with ``q = sum_i q_i``, ``p_i`` the module's visit rate and base-2 logs.
"""

from __future__ import annotations

import math
import random

from ..errors import NoEdges
from ..graph import CausalGraph, SimpleGraph
from ._weighted import WeightedGraph, renumber
from .partition import Partition, _as_simple

MAX_SWEEPS = 100


def plogp(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def map_equation(g: CausalGraph | SimpleGraph, p: Partition) -> float:
    """Two-level code length (bits) of partition ``p``."""
    sg = _as_simple(g)
    if sg.m == 0:
        raise NoEdges("map equation needs at least one edge")
    comm = p.mapping
    two_m = 2.0 * sg.m
    adj = sg.adjacency()
    exit_w: dict[int, float] = {}
    flow: dict[int, float] = {}
    node_term = 0.0
    for v in sg.nodes:
        c = comm[v]
        pv = len(adj[v]) / two_m
        node_term += plogp(pv)
        flow[c] = flow.get(c, 0.0) + pv
        exit_w[c] = exit_w.get(c, 0.0) + sum(1 for u in adj[v] if comm[u] != c)
    return _code_length({c: w / two_m for c, w in exit_w.items()}, flow, node_term)


def _code_length(exit_rate: dict[int, float], flow: dict[int, float], node_term: float) -> float:
    q = math.fsum(exit_rate.values())
    return (
        plogp(q)
        - 2.0 * math.fsum(plogp(x) for x in exit_rate.values())
        - node_term
        + math.fsum(plogp(exit_rate[c] + flow[c]) for c in flow)
    )


class _State:
    """Module bookkeeping over a weighted (possibly aggregated) graph."""

    def __init__(self, g: WeightedGraph, comm: list[int], node_term: float):
        self.g = g
        self.comm = list(comm)
        self.two_m = g.total
        self.node_term = node_term
        self.flow: dict[int, float] = {}
        self.exit: dict[int, float] = {}  # boundary weight, not yet divided by 2m
        for v in range(g.n):
            c = self.comm[v]
            self.flow[c] = self.flow.get(c, 0.0) + g.strength[v] / self.two_m
            self.exit.setdefault(c, 0.0)
            for u, w in g.adj[v].items():
                if self.comm[u] != c:
                    self.exit[c] += w

    def length(self) -> float:
        rates = {c: x / self.two_m for c, x in self.exit.items()}
        return _code_length(rates, self.flow, self.node_term)

    def move(self, v: int, target: int) -> None:
        g, src = self.g, self.comm[v]
        w_src = sum(w for u, w in g.adj[v].items() if self.comm[u] == src)
        w_dst = sum(w for u, w in g.adj[v].items() if self.comm[u] == target)
        outer = g.strength[v] - 2.0 * g.self_weight[v]  # v's weight to other nodes
        self.exit[src] += -(outer - w_src) + w_src
        self.exit[target] = self.exit.get(target, 0.0) + (outer - w_dst) - w_dst
        pv = g.strength[v] / self.two_m
        self.flow[src] -= pv
        self.flow[target] = self.flow.get(target, 0.0) + pv
        self.comm[v] = target
        if self.flow[src] <= 1e-15 and not any(self.comm[u] == src for u in range(g.n)):
            del self.flow[src], self.exit[src]


def _local_moves(state: _State, rng: random.Random) -> bool:
    """Greedy sweeps; returns whether any node moved."""
    moved_any = False
    g = state.g
    for _ in range(MAX_SWEEPS):
        order = list(range(g.n))
        rng.shuffle(order)
        moved = False
        for v in order:
            current = state.length()
            src = state.comm[v]
            best, best_len = src, current
            for c in sorted({state.comm[u] for u in g.adj[v]} - {src}):
                state.move(v, c)
                trial = state.length()
                state.move(v, src)
                if trial < best_len - 1e-12:
                    best, best_len = c, trial
            if best != src:
                state.move(v, best)
                moved = moved_any = True
        if not moved:
            break
    return moved_any


def infomap_two_level(g: CausalGraph | SimpleGraph, seed: int = 42) -> Partition:
    """Two-level Infomap partition; never worse than the one-module solution.

    Raises:
        NoEdges: the graph has no edges.
    """
    sg = _as_simple(g)
    if sg.m == 0:
        raise NoEdges("Infomap needs at least one edge")
    rng = random.Random(seed)
    wg, ids = WeightedGraph.from_simple(sg)
    two_m = wg.total
    node_term = math.fsum(plogp(s / two_m) for s in wg.strength)
    node_of = list(range(wg.n))
    g_cur = wg
    while True:
        state = _State(g_cur, list(range(g_cur.n)), node_term)
        _local_moves(state, rng)
        comm = renumber(state.comm)
        if max(comm) + 1 == g_cur.n:
            break
        node_of = [comm[a] for a in node_of]
        g_cur = g_cur.aggregate(comm)
    found = Partition.from_labels(dict(zip(ids, node_of)))
    single = Partition.from_groups([list(ids)])
    if map_equation(sg, single) <= map_equation(sg, found) + 1e-12:
        return single
    return found
