"""Community detection on the undirected projection of a causal graph."""

from __future__ import annotations

from ..errors import NoEdges
from ..graph import CausalGraph
from .girvan_newman import edge_betweenness, girvan_newman, girvan_newman_dendrogram, select_by_modularity
from .infomap import infomap_two_level, map_equation
from .label_propagation import label_propagation
from .leiden import leiden
from .partition import AlignmentReport, CommunityAlignment, Partition, category_alignment, modularity

ALGORITHMS = ("leiden", "girvan-newman", "infomap", "label-propagation")


def detect(g: CausalGraph, algorithm: str, seed: int = 42, resolution: float = 1.0) -> Partition:
    if algorithm == "leiden":
        return leiden(g, resolution=resolution, seed=seed)
    if algorithm == "girvan-newman":
        return girvan_newman(g)
    if algorithm == "infomap":
        return infomap_two_level(g, seed=seed)
    if algorithm == "label-propagation":
        return label_propagation(g, seed=seed)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")


def partition_document(
    g: CausalGraph, p: Partition, algorithm: str, seed: int, resolution: float
) -> dict:
    quality: dict = {}
    try:
        quality["modularity"] = modularity(g, p, resolution)
        quality["map_equation"] = map_equation(g, p)
    except NoEdges:
        quality["modularity"] = None
    return {
        "algorithm": algorithm,
        "seed": seed,
        "resolution": resolution,
        "assignments": [{"node": v, "community": c} for v, c in p.assignments],
        "community_count": p.community_count,
        "quality": quality,
    }


__all__ = [
    "ALGORITHMS",
    "AlignmentReport",
    "CommunityAlignment",
    "Partition",
    "category_alignment",
    "detect",
    "edge_betweenness",
    "girvan_newman",
    "girvan_newman_dendrogram",
    "infomap_two_level",
    "label_propagation",
    "leiden",
    "map_equation",
    "modularity",
    "partition_document",
    "select_by_modularity",
]
