"""Leiden modularity optimisation (local moving, refinement, aggregation)."""

from __future__ import annotations

import math
import random
from collections import deque

from ..graph import CausalGraph, SimpleGraph
from ._weighted import WeightedGraph, renumber
from .girvan_newman import _components
from .partition import Partition, _as_simple

THETA = 0.01  # refinement randomness
MAX_ITERATIONS = 20


def _move_nodes(g: WeightedGraph, comm: list[int], gamma: float, rng: random.Random) -> list[int]:
    """Queue-based local moving; returns the (renumbered) community vector."""
    two_m = g.total
    comm = list(comm)
    tot: dict[int, float] = {}
    for v in range(g.n):
        tot[comm[v]] = tot.get(comm[v], 0.0) + g.strength[v]
    order = list(range(g.n))
    rng.shuffle(order)
    queue = deque(order)
    queued = [True] * g.n
    next_label = max(comm, default=-1) + 1
    while queue:
        v = queue.popleft()
        queued[v] = False
        kv = g.strength[v]
        links: dict[int, float] = {}
        for u, w in g.adj[v].items():
            links[comm[u]] = links.get(comm[u], 0.0) + w
        own = comm[v]
        tot[own] -= kv
        best, best_gain = own, links.get(own, 0.0) - gamma * kv * tot[own] / two_m
        for c in sorted(links):
            gain = links[c] - gamma * kv * tot[c] / two_m
            if gain > best_gain + 1e-12:
                best, best_gain = c, gain
        if tot[own] > 0 and best_gain < -1e-12:
            # an empty community scores 0
            best, best_gain = next_label, 0.0
            next_label += 1
        tot[best] = tot.get(best, 0.0) + kv
        if best != own:
            comm[v] = best
            for u in g.adj[v]:
                if comm[u] != best and not queued[u]:
                    queue.append(u)
                    queued[u] = True
    return renumber(comm)


def _refine(g: WeightedGraph, comm: list[int], gamma: float, rng: random.Random) -> list[int]:
    """Merge singletons within each community into well-connected sub-clusters."""
    two_m = g.total
    refined = list(range(g.n))
    size_k = list(g.strength)  # refined-cluster strength
    members: dict[int, set[int]] = {v: {v} for v in range(g.n)}
    comm_k: dict[int, float] = {}
    for v in range(g.n):
        comm_k[comm[v]] = comm_k.get(comm[v], 0.0) + g.strength[v]

    def ext_weight(nodes: set[int], c: int) -> float:
        # weight from `nodes` to the rest of community c
        return sum(w for v in nodes for u, w in g.adj[v].items() if comm[u] == c and u not in nodes)

    order = list(range(g.n))
    rng.shuffle(order)
    for v in order:
        c = comm[v]
        kv = g.strength[v]
        if len(members[refined[v]]) != 1:
            continue
        if ext_weight({v}, c) < gamma * kv * (comm_k[c] - kv) / two_m:
            continue
        links: dict[int, float] = {}
        for u, w in g.adj[v].items():
            if comm[u] == c:
                links[refined[u]] = links.get(refined[u], 0.0) + w
        options = [(v, 0.0)]
        for r in sorted(links):
            kr = size_k[r]
            if ext_weight(members[r], c) < gamma * kr * (comm_k[c] - kr) / two_m:
                continue
            gain = links[r] - gamma * kv * kr / two_m
            if gain >= 0:
                options.append((r, gain))
        top = max(gain for _, gain in options)
        weights = [math.exp((gain - top) / THETA) for _, gain in options]
        target = rng.choices([r for r, _ in options], weights=weights)[0]
        if target != v:
            members[target].add(v)
            del members[v]
            size_k[target] += kv
            refined[v] = target
    return renumber(refined)


def _connected_split(sg: SimpleGraph, p: Partition) -> Partition:
    groups = []
    for block in p.groups():
        inside = set(block)
        sub_edges = {(u, v) for u, v in sg.edges if u in inside and v in inside}
        groups.extend(_components(tuple(sorted(inside)), sub_edges).groups())
    return Partition.from_groups(groups)


def _one_pass(sg: SimpleGraph, start: list[int], gamma: float, rng: random.Random) -> list[int]:
    g, _ = WeightedGraph.from_simple(sg)
    node_of = list(range(sg.n))  # original node -> current aggregate node
    comm = renumber(start)
    while True:
        comm = _move_nodes(g, comm, gamma, rng)
        if max(comm) + 1 == g.n:
            break
        refined = _refine(g, comm, gamma, rng)
        if max(refined) + 1 == g.n:
            refined = comm  # refinement made no merge; aggregate on the moved partition
        parent = [0] * (max(refined) + 1)
        for v in range(g.n):
            parent[refined[v]] = comm[v]
        node_of = [refined[a] for a in node_of]
        g = g.aggregate(refined)
        comm = parent
    return [comm[a] for a in node_of]


def leiden(
    g: CausalGraph | SimpleGraph, resolution: float = 1.0, seed: int = 42
) -> Partition:
    """Leiden partition of the undirected projection.

    Passes are repeated from the previous result until the partition stops
    changing. Every returned community induces a connected subgraph.
    """
    sg = _as_simple(g)
    if sg.n == 0:
        return Partition(())
    if sg.m == 0:
        return Partition.from_groups([[v] for v in sg.nodes])
    rng = random.Random(seed)
    labels = list(range(sg.n))
    for _ in range(MAX_ITERATIONS):
        new = renumber(_one_pass(sg, labels, resolution, rng))
        if new == renumber(labels):
            break
        labels = new
    p = Partition.from_labels(dict(zip(sg.nodes, labels)))
    return _connected_split(sg, p)
