"""Girvan-Newman divisive clustering with modularity-based cut selection."""

from __future__ import annotations

from .. import kernels
from ..graph import CausalGraph, SimpleGraph
from .partition import Partition, _as_simple, modularity

_TIE = 1e-9


def _components(nodes: tuple[str, ...], edges: set[tuple[str, str]]) -> Partition:
    parent = {v: v for v in nodes}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    return Partition.from_labels({v: find(v) for v in nodes})


def edge_betweenness(g: SimpleGraph) -> dict[tuple[str, str], float]:
    """Shortest-path edge betweenness (unnormalised, each pair counted once)."""
    ids, indptr, indices = kernels.to_csr(g)
    _, arc = kernels.brandes(indptr, indices)
    out: dict[tuple[str, str], float] = {}
    for i in range(len(ids)):
        for k in range(indptr[i], indptr[i + 1]):
            j = int(indices[k])
            key = (ids[i], ids[j]) if i < j else (ids[j], ids[i])
            out[key] = out.get(key, 0.0) + float(arc[k]) / 2.0
    return out


def girvan_newman_dendrogram(g: CausalGraph | SimpleGraph) -> list[Partition]:
    """Component partitions before any removal and after every edge removal.

    Each step removes the edge of highest betweenness; near-ties (relative
    1e-9) go to the lexicographically smallest endpoint pair.
    """
    sg = _as_simple(g)
    edges = set(sg.edges)
    levels = [_components(sg.nodes, edges)]
    while edges:
        scores = edge_betweenness(SimpleGraph(sg.nodes, tuple(sorted(edges))))
        top = max(scores.values())
        victim = min(e for e, s in scores.items() if s >= top - _TIE * max(1.0, top))
        edges.remove(victim)
        levels.append(_components(sg.nodes, edges))
    return levels


def select_by_modularity(g: SimpleGraph, levels: list[Partition]) -> tuple[int, list[float]]:
    """Index of the best level: max modularity, then fewest communities, then earliest."""
    scores = [modularity(g, p) for p in levels]
    best = 0
    for i, q in enumerate(scores):
        b = scores[best]
        if q > b + 1e-12 or (abs(q - b) <= 1e-12 and levels[i].community_count < levels[best].community_count):
            best = i
    return best, scores


def girvan_newman(g: CausalGraph | SimpleGraph) -> Partition:
    sg = _as_simple(g)
    levels = girvan_newman_dendrogram(sg)
    if sg.m == 0:
        return levels[0]
    best, _ = select_by_modularity(sg, levels)
    return levels[best]
