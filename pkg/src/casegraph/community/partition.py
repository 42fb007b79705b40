"""Partitions, modularity, and 5P-category alignment."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from ..errors import NoEdges, PartitionMismatch
from ..graph import CausalGraph, FactorCategory, SimpleGraph, undirected_projection


@dataclass(frozen=True)
class Partition:
    """Node id -> community index, indices contiguous from 0.

    Use :meth:`from_groups` or :meth:`from_labels`; both renumber
    communities by their smallest node id so equal partitions compare equal.
    """

    assignments: tuple[tuple[str, int], ...]

    @classmethod
    def from_labels(cls, labels: Mapping[str, object]) -> "Partition":
        groups: dict[object, list[str]] = {}
        for node, lab in labels.items():
            groups.setdefault(lab, []).append(node)
        return cls.from_groups(groups.values())

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[str]]) -> "Partition":
        blocks = sorted((sorted(b) for b in groups if b), key=lambda b: b[0])
        pairs = [(v, i) for i, block in enumerate(blocks) for v in block]
        if len({v for v, _ in pairs}) != len(pairs):
            raise PartitionMismatch("a node appears in more than one community")
        return cls(tuple(sorted(pairs)))

    @property
    def mapping(self) -> dict[str, int]:
        return dict(self.assignments)

    @property
    def community_count(self) -> int:
        return len({c for _, c in self.assignments})

    def groups(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.community_count)]
        for v, c in self.assignments:
            out[c].append(v)
        return out

    def as_sets(self) -> set[frozenset[str]]:
        return {frozenset(b) for b in self.groups()}


def _as_simple(g: CausalGraph | SimpleGraph) -> SimpleGraph:
    return g if isinstance(g, SimpleGraph) else undirected_projection(g)


def _check_cover(nodes: Iterable[str], p: Partition) -> None:
    if set(nodes) != set(p.mapping):
        raise PartitionMismatch("partition does not cover exactly the graph's nodes")


def modularity(g: CausalGraph | SimpleGraph, p: Partition, resolution: float = 1.0) -> float:
    """``sum_c [e_c/m - resolution * (d_c/2m)^2]`` on the undirected projection."""
    sg = _as_simple(g)
    _check_cover(sg.nodes, p)
    if sg.m == 0:
        raise NoEdges("modularity is undefined without edges")
    comm = p.mapping
    m = sg.m
    inner = Counter()
    degree = Counter()
    for u, v in sg.edges:
        degree[comm[u]] += 1
        degree[comm[v]] += 1
        if comm[u] == comm[v]:
            inner[comm[u]] += 1
    return math.fsum(inner[c] / m - resolution * (degree[c] / (2 * m)) ** 2 for c in set(comm.values()))


@dataclass(frozen=True)
class CommunityAlignment:
    size: int
    majority: FactorCategory
    fraction: float


@dataclass(frozen=True)
class AlignmentReport:
    communities: tuple[CommunityAlignment, ...]
    purity: float


def category_alignment(g: CausalGraph, p: Partition) -> AlignmentReport:
    """Majority 5P category per community and overall purity.

    Ties go to the category listed first in :class:`FactorCategory`.
    """
    _check_cover(g.node_ids, p)
    if g.n == 0:
        raise PartitionMismatch("alignment needs at least one node")
    order = {c: i for i, c in enumerate(FactorCategory)}
    rows = []
    hits = 0
    for block in p.groups():
        counts = Counter(g.node(v).category for v in block)
        best = min(counts, key=lambda c: (-counts[c], order[c]))
        hits += counts[best]
        rows.append(CommunityAlignment(len(block), best, counts[best] / len(block)))
    return AlignmentReport(tuple(rows), hits / g.n)
