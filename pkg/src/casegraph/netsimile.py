"""NetSimile structural signatures and a [0, 1] similarity derived from them.

Signature layout (35 entries): for each feature in :data:`FEATURES`, the
aggregates in :data:`AGGREGATES`, feature-major. Moments are population
moments; kurtosis is excess kurtosis; skewness and kurtosis of a constant
column are 0.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import kernels
from .errors import EmptyGraph, LengthMismatch, UnknownNode
from .graph import CausalGraph, SimpleGraph, undirected_projection

FEATURES = (
    "degree",
    "clustering",
    "mean_neighbor_degree",
    "mean_neighbor_clustering",
    "egonet_edges",
    "egonet_outgoing_edges",
    "egonet_neighbors",
)
AGGREGATES = ("median", "mean", "std", "skewness", "kurtosis")
SIGNATURE_LENGTH = len(FEATURES) * len(AGGREGATES)


def signature_labels() -> list[str]:
    return [f"{f}.{a}" for f in FEATURES for a in AGGREGATES]


def _feature_table(g: SimpleGraph) -> tuple[tuple[str, ...], list[tuple[float, ...]]]:
    ids, indptr, indices = kernels.to_csr(g)
    links = kernels.neighbor_links(indptr, indices)
    n = len(ids)
    nbrs = [indices[indptr[i]:indptr[i + 1]].tolist() for i in range(n)]
    deg = [len(row) for row in nbrs]
    clust = [links[i] / (deg[i] * (deg[i] - 1) / 2) if deg[i] > 1 else 0.0 for i in range(n)]
    rows = []
    for i in range(n):
        ego = set(nbrs[i])
        ego.add(i)
        internal = deg[i] + int(links[i])
        outgoing = sum(deg[u] for u in ego) - 2 * internal
        frontier = {w for u in ego for w in nbrs[u]} - ego
        if nbrs[i]:
            nbr_deg = math.fsum(deg[u] for u in nbrs[i]) / deg[i]
            nbr_clust = math.fsum(clust[u] for u in nbrs[i]) / deg[i]
        else:
            nbr_deg = nbr_clust = 0.0
        rows.append(
            (float(deg[i]), float(clust[i]), nbr_deg, nbr_clust, float(internal), float(outgoing), float(len(frontier)))
        )
    return ids, rows


def node_features(g: SimpleGraph, v: str) -> tuple[float, ...]:
    """The seven NetSimile features of node ``v`` (order as :data:`FEATURES`)."""
    if v not in set(g.nodes):
        raise UnknownNode(f"node {v!r} is not in the graph")
    ids, rows = _feature_table(g)
    return rows[ids.index(v)]


def _aggregate(column: Sequence[float]) -> list[float]:
    # sorted + fsum keeps the result independent of node order
    xs = sorted(column)
    k = len(xs)
    mean = math.fsum(xs) / k
    median = float(np.median(xs))
    if xs[0] == xs[-1]:
        return [median, mean, 0.0, 0.0, 0.0]
    dev = [x - mean for x in xs]
    m2 = math.fsum(d * d for d in dev) / k
    m3 = math.fsum(d ** 3 for d in dev) / k
    m4 = math.fsum(d ** 4 for d in dev) / k
    return [median, mean, math.sqrt(m2), m3 / m2 ** 1.5, m4 / (m2 * m2) - 3.0]


def graph_signature(g: SimpleGraph | CausalGraph) -> np.ndarray:
    """35-entry signature of a non-empty graph."""
    sg = undirected_projection(g) if isinstance(g, CausalGraph) else g
    if sg.n == 0:
        raise EmptyGraph("signature of an empty graph is undefined")
    _, rows = _feature_table(sg)
    out: list[float] = []
    for col in zip(*rows):
        out.extend(_aggregate(col))
    return np.array(out, dtype=np.float64)


def canberra_distance(x: Sequence[float], y: Sequence[float]) -> float:
    """Canberra distance; terms with ``|x_i| + |y_i| = 0`` contribute 0."""
    if len(x) != len(y):
        raise LengthMismatch(f"vectors of length {len(x)} and {len(y)}")
    total = 0.0
    for a, b in zip(x, y):
        denom = abs(a) + abs(b)
        if denom > 0:
            total += abs(a - b) / denom
    return total


def netsimile_similarity(g1: CausalGraph | SimpleGraph, g2: CausalGraph | SimpleGraph) -> float:
    """``1 - canberra(sig1, sig2) / 35``: 1 for identical structure, 0 at most different."""
    d = canberra_distance(graph_signature(g1), graph_signature(g2))
    return 1.0 - d / SIGNATURE_LENGTH
