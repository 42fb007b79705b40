"""Small weighted multigraph used by the agglomerative community methods."""

from __future__ import annotations

from dataclasses import dataclass

from ..graph import SimpleGraph


@dataclass
class WeightedGraph:
    adj: list[dict[int, float]]  # neighbour -> weight, no self entries
    self_weight: list[float]  # internal weight carried by an aggregated node
    strength: list[float]  # sum of incident weights, self weight counted twice

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def total(self) -> float:
        """Twice the total edge weight."""
        return sum(self.strength)

    @classmethod
    def from_simple(cls, g: SimpleGraph) -> tuple["WeightedGraph", tuple[str, ...]]:
        ids = g.nodes
        pos = {v: i for i, v in enumerate(ids)}
        adj: list[dict[int, float]] = [{} for _ in ids]
        for u, v in g.edges:
            adj[pos[u]][pos[v]] = 1.0
            adj[pos[v]][pos[u]] = 1.0
        strength = [float(len(a)) for a in adj]
        return cls(adj, [0.0] * len(ids), strength), ids

    def aggregate(self, membership: list[int]) -> "WeightedGraph":
        """Collapse nodes sharing a membership value (values must be 0..k-1)."""
        k = max(membership) + 1 if membership else 0
        adj: list[dict[int, float]] = [{} for _ in range(k)]
        self_w = [0.0] * k
        strength = [0.0] * k
        for v in range(self.n):
            cv = membership[v]
            self_w[cv] += self.self_weight[v]
            strength[cv] += self.strength[v]
            for u, w in self.adj[v].items():
                cu = membership[u]
                if cu == cv:
                    self_w[cv] += w / 2.0  # each internal edge is seen from both ends
                else:
                    adj[cv][cu] = adj[cv].get(cu, 0.0) + w
        return WeightedGraph(adj, self_w, strength)


def renumber(labels: list[int]) -> list[int]:
    """Relabel to 0..k-1 in order of first appearance."""
    seen: dict[int, int] = {}
    return [seen.setdefault(c, len(seen)) for c in labels]
