"""Graph-theory statistics for causal graphs.

Density, degree distribution and category connectivity are computed on the
directed graph. Centrality, clustering, path and assortativity statistics
use the undirected projection. Disconnected graphs are handled with
reachable-pair conventions instead of errors.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .errors import NoEdges, TooFewNodes, ZeroVariance
from .graph import CORE_CATEGORIES, CausalGraph, SimpleGraph, degree_sequences, undirected_projection

KL_EPSILON = 1e-10


def _simple(g: CausalGraph | SimpleGraph) -> SimpleGraph:
    return g if isinstance(g, SimpleGraph) else undirected_projection(g)


def edge_density(g: CausalGraph) -> float:
    """Directed density ``m / (n (n - 1))``."""
    if g.n < 2:
        raise TooFewNodes("edge density needs at least 2 nodes")
    return g.m / (g.n * (g.n - 1))


@dataclass(frozen=True)
class Centralities:
    degree: dict[str, float]
    betweenness: dict[str, float]
    closeness: dict[str, float]

    def summary(self) -> dict[str, float]:
        out = {}
        for name in ("degree", "betweenness", "closeness"):
            values = list(getattr(self, name).values())
            out[f"mean_{name}"] = math.fsum(values) / len(values)
            out[f"max_{name}"] = max(values)
        return out


def centralities(g: CausalGraph | SimpleGraph) -> Centralities:
    """Degree, betweenness and Wasserman-Faust closeness on the projection.

    Betweenness is normalised by ``2 / ((n-1)(n-2))`` (0 when ``n = 2``).
    Closeness is ``((r-1)/(n-1)) * ((r-1)/sum_d)`` where ``r`` counts the
    nodes reachable from ``v`` including ``v`` itself.
    """
    sg = _simple(g)
    n = sg.n
    if n < 2:
        raise TooFewNodes("centralities need at least 2 nodes")
    ids, indptr, indices = kernels.to_csr(sg)
    deg = np.diff(indptr)
    dist = kernels.all_pairs_distances(indptr, indices)
    node_bc, _ = kernels.brandes(indptr, indices)
    scale = 1.0 / ((n - 1) * (n - 2)) if n > 2 else 0.0  # halving and 2/((n-1)(n-2)) combined
    degree_c, between_c, close_c = {}, {}, {}
    for i, v in enumerate(ids):
        degree_c[v] = float(deg[i]) / (n - 1)
        between_c[v] = float(node_bc[i]) * scale
        row = dist[i]
        reach = row[row > 0]
        r = len(reach) + 1
        total = int(reach.sum())
        close_c[v] = ((r - 1) / (n - 1)) * ((r - 1) / total) if total > 0 else 0.0
    return Centralities(degree_c, between_c, close_c)


@dataclass(frozen=True)
class ClusteringStats:
    local: dict[str, float]
    mean_local: float
    transitivity: float
    triangle_count: int


def clustering_stats(g: CausalGraph | SimpleGraph) -> ClusteringStats:
    sg = _simple(g)
    if sg.n == 0:
        return ClusteringStats({}, 0.0, 0.0, 0)
    ids, indptr, indices = kernels.to_csr(sg)
    deg = np.diff(indptr)
    links = kernels.neighbor_links(indptr, indices)
    local = {}
    triples = 0
    for i, v in enumerate(ids):
        d = int(deg[i])
        pairs = d * (d - 1) // 2
        triples += pairs
        local[v] = int(links[i]) / pairs if pairs else 0.0
    triangles = int(links.sum()) // 3
    return ClusteringStats(
        local=local,
        mean_local=math.fsum(local.values()) / len(local),
        transitivity=3 * triangles / triples if triples else 0.0,
        triangle_count=triangles,
    )


@dataclass(frozen=True)
class PathStats:
    diameter: int
    mean_shortest_path: float
    fully_connected: bool


def path_stats(g: CausalGraph | SimpleGraph) -> PathStats:
    sg = _simple(g)
    if sg.n < 2:
        raise TooFewNodes("path statistics need at least 2 nodes")
    _, indptr, indices = kernels.to_csr(sg)
    dist = kernels.all_pairs_distances(indptr, indices)
    finite = dist[dist > 0]
    if finite.size == 0:
        raise NoEdges("no pair of nodes is connected")
    return PathStats(
        diameter=int(finite.max()),
        mean_shortest_path=int(finite.sum()) / finite.size,
        fully_connected=bool(finite.size == sg.n * (sg.n - 1)),
    )


def degree_assortativity(g: CausalGraph | SimpleGraph) -> float:
    """Pearson correlation of endpoint degrees over both orientations of each edge.

    Raises:
        NoEdges: the graph has no edges.
        ZeroVariance: every endpoint degree is equal, so the correlation is undefined.
    """
    sg = _simple(g)
    if sg.m == 0:
        raise NoEdges("assortativity needs at least one edge")
    adj = sg.adjacency()
    xs, ys = [], []
    for u, v in sg.edges:
        du, dv = len(adj[u]), len(adj[v])
        xs += [du, dv]
        ys += [dv, du]
    # both orientations make the two marginals identical
    k = len(xs)
    mean = math.fsum(xs) / k
    var = math.fsum((x - mean) ** 2 for x in xs)
    if var == 0:
        raise ZeroVariance("all endpoint degrees are equal")
    cov = math.fsum((x - mean) * (y - mean) for x, y in zip(xs, ys))
    return cov / var


# ---------------------------------------------------------------------------
# degree distributions


@dataclass(frozen=True)
class DegreeHistogram:
    """Probability mass over total degree ``0..max_degree``."""

    mass: tuple[float, ...]

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length)
        out[: len(self.mass)] = self.mass
        return out


def degree_distribution(g: CausalGraph) -> DegreeHistogram:
    if g.n == 0:
        raise TooFewNodes("degree distribution needs at least 1 node")
    totals = [t for _, _, t in degree_sequences(g).values()]
    counts = np.bincount(totals)
    return DegreeHistogram(tuple(float(c) / g.n for c in counts))


def kl_divergence(p: DegreeHistogram, q: DegreeHistogram, eps: float = KL_EPSILON) -> float:
    """``sum p ln(p/q)`` with ``q`` smoothed by ``eps`` per bin and renormalised."""
    length = max(len(p.mass), len(q.mass))
    pv = p.padded(length)
    qv = q.padded(length) + eps
    qv = qv / qv.sum()
    mask = pv > 0
    return max(0.0, float(np.sum(pv[mask] * np.log(pv[mask] / qv[mask]))))


def emd_1d(p: DegreeHistogram, q: DegreeHistogram) -> float:
    """Earth mover's distance with unit ground distance between adjacent degrees."""
    length = max(len(p.mass), len(q.mass))
    return float(np.sum(np.abs(np.cumsum(p.padded(length)) - np.cumsum(q.padded(length)))))


# ---------------------------------------------------------------------------
# 5P connectivity


@dataclass(frozen=True)
class CategoryConnectivity:
    """Directed edge counts between the four generation categories.

    ``density[a][b]`` is ``None`` when the normaliser is zero.
    """

    counts: dict[str, dict[str, int]]
    density: dict[str, dict[str, float | None]]
    sizes: dict[str, int]

    def to_dict(self) -> dict:
        return asdict(self)


def inter_category_connectivity(g: CausalGraph) -> CategoryConnectivity:
    names = [c.value for c in CORE_CATEGORIES]
    sizes = dict.fromkeys(names, 0)
    for v in g.nodes:
        if v.category.value in sizes:
            sizes[v.category.value] += 1
    counts = {a: dict.fromkeys(names, 0) for a in names}
    for e in g.edges:
        a = g.node(e.source).category.value
        b = g.node(e.target).category.value
        if a in counts and b in counts:
            counts[a][b] += 1
    density: dict[str, dict[str, float | None]] = {}
    for a in names:
        density[a] = {}
        for b in names:
            norm = sizes[a] * (sizes[a] - 1) if a == b else sizes[a] * sizes[b]
            density[a][b] = counts[a][b] / norm if norm else None
    return CategoryConnectivity(counts, density, sizes)


def has_directed_cycle(g: CausalGraph) -> bool:
    succ: dict[str, list[str]] = {v: [] for v in g.node_ids}
    for e in g.edges:
        succ[e.source].append(e.target)
    state = dict.fromkeys(g.node_ids, 0)  # 0 new, 1 on stack, 2 done
    for root in g.node_ids:
        if state[root]:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                state[v] = 2
                stack.pop()
            elif state[w] == 1:
                return True
            elif state[w] == 0:
                state[w] = 1
                stack.append((w, iter(succ[w])))
    return False


CYCLE_LIMIT = 10_000


def directed_cycle_count(g: CausalGraph, limit: int = CYCLE_LIMIT) -> tuple[int, bool]:
    """Number of elementary directed cycles, antiparallel pairs included.

    Each cycle is counted once, rooted at its smallest node id. Enumeration
    stops at ``limit``; the flag says whether it was reached.
    """
    succ: dict[str, list[str]] = {v: [] for v in g.node_ids}
    for e in g.edges:
        succ[e.source].append(e.target)
    count = 0
    for root in g.node_ids:
        stack = [(root, iter(succ[root]))]
        on_path = {root}
        while stack:
            _, it = stack[-1]
            w = next(it, None)
            if w is None:
                on_path.discard(stack.pop()[0])
            elif w == root:
                count += 1
                if count >= limit:
                    return count, True
            elif w > root and w not in on_path:
                on_path.add(w)
                stack.append((w, iter(succ[w])))
    return count, False


# ---------------------------------------------------------------------------
# report


@dataclass
class MetricsReport:
    session_id: str
    node_count: int
    edge_count: int
    topology: dict = field(default_factory=dict)
    clustering: dict = field(default_factory=dict)
    centrality: dict = field(default_factory=dict)
    categories: dict = field(default_factory=dict)
    degree_distribution: list[float] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def metrics_report(g: CausalGraph) -> MetricsReport:
    """All statistics for one graph, grouped as topology / clustering / centrality.

    Values that are undefined for the given graph are ``None``.
    """
    report = MetricsReport(g.session_id, g.n, g.m)
    topo: dict = {"edge_density": None, "diameter": None, "mean_shortest_path": None,
                  "fully_connected": None, "degree_assortativity": None,
                  "cycle_present": has_directed_cycle(g)}
    topo["cycle_count"], topo["cycle_count_truncated"] = directed_cycle_count(g)
    if g.n >= 2:
        topo["edge_density"] = edge_density(g)
        try:
            ps = path_stats(g)
            topo.update(diameter=ps.diameter, mean_shortest_path=ps.mean_shortest_path,
                        fully_connected=ps.fully_connected)
        except NoEdges:
            topo["fully_connected"] = False
        c = centralities(g)
        report.centrality = {**c.summary(), "per_node": {
            v: {"degree": c.degree[v], "betweenness": c.betweenness[v], "closeness": c.closeness[v]}
            for v in g.node_ids}}
    try:
        topo["degree_assortativity"] = degree_assortativity(g)
    except (NoEdges, ZeroVariance):
        pass
    report.topology = topo
    cs = clustering_stats(g)
    report.clustering = {"mean_local": cs.mean_local, "transitivity": cs.transitivity,
                         "triangle_count": cs.triangle_count, "local": cs.local}
    report.categories = inter_category_connectivity(g).to_dict()
    if g.n:
        report.degree_distribution = list(degree_distribution(g).mass)
    report.metadata = {
        "projection": "undirected for centrality/clustering/paths/assortativity; directed for density",
        "closeness": "Wasserman-Faust",
        "betweenness_normalisation": "2/((n-1)(n-2))",
        "kl_epsilon": KL_EPSILON,
        "kernel_backend": kernels.BACKEND,
    }
    return report


def degree_distances(g1: CausalGraph, g2: CausalGraph) -> dict[str, float]:
    """KL divergence ``KL(g1 || g2)`` and EMD between total-degree distributions."""
    p, q = degree_distribution(g1), degree_distribution(g2)
    return {"kl_divergence": kl_divergence(p, q), "emd": emd_1d(p, q)}
