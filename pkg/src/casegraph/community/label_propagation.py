"""Asynchronous label propagation with deterministic tie-breaking."""

from __future__ import annotations

import random
from collections import Counter

from ..graph import CausalGraph, SimpleGraph
from .partition import Partition, _as_simple

MAX_SWEEPS = 100


def label_propagation(g: CausalGraph | SimpleGraph, seed: int = 42) -> Partition:
    """Each node adopts its neighbours' most frequent label (ties: smallest).

    Nodes are visited in a fresh seeded order every sweep; the run stops after
    a sweep without changes or after 100 sweeps.
    """
    sg = _as_simple(g)
    adj = sg.adjacency()
    labels = {v: i for i, v in enumerate(sg.nodes)}
    rng = random.Random(seed)
    order = list(sg.nodes)
    for _ in range(MAX_SWEEPS):
        rng.shuffle(order)
        changed = False
        for v in order:
            if not adj[v]:
                continue
            counts = Counter(labels[u] for u in adj[v])
            top = max(counts.values())
            new = min(lab for lab, c in counts.items() if c == top)
            if new != labels[v]:
                labels[v] = new
                changed = True
        if not changed:
            break
    return Partition.from_labels(labels)
