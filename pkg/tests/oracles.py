"""Brute-force reference implementations used only by the tests.

Everything here works from plain edge lists with exhaustive enumeration and
shares no code with the package.
"""

from __future__ import annotations

import itertools
import math
import random

INF = math.inf


def undirected(nodes, directed_edges):
    adj = {v: set() for v in nodes}
    for u, v in directed_edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def floyd_warshall(nodes, adj):
    d = {u: {v: (0 if u == v else (1 if v in adj[u] else INF)) for v in nodes} for u in nodes}
    for k in nodes:
        for i in nodes:
            for j in nodes:
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def all_shortest_paths(adj, dist, s, t):
    """Every shortest s-t path, by depth-first extension along decreasing distance."""
    if dist[s][t] == INF:
        return []
    paths = []

    def walk(path):
        v = path[-1]
        if v == t:
            paths.append(list(path))
            return
        for w in adj[v]:
            if dist[w][t] == dist[v][t] - 1:
                path.append(w)
                walk(path)
                path.pop()

    walk([s])
    return paths


def betweenness(nodes, adj):
    n = len(nodes)
    dist = floyd_warshall(nodes, adj)
    raw = dict.fromkeys(nodes, 0.0)
    for s, t in itertools.combinations(nodes, 2):
        paths = all_shortest_paths(adj, dist, s, t)
        if not paths:
            continue
        for v in nodes:
            if v in (s, t):
                continue
            through = sum(1 for p in paths if v in p)
            raw[v] += through / len(paths)
    norm = 2.0 / ((n - 1) * (n - 2)) if n > 2 else 0.0
    return {v: raw[v] * norm for v in nodes}


def closeness_wf(nodes, adj):
    n = len(nodes)
    dist = floyd_warshall(nodes, adj)
    out = {}
    for v in nodes:
        finite = [dist[v][u] for u in nodes if u != v and dist[v][u] != INF]
        r = len(finite) + 1
        total = sum(finite)
        out[v] = ((r - 1) / (n - 1)) * ((r - 1) / total) if total else 0.0
    return out


def local_clustering(nodes, adj):
    out = {}
    for v in nodes:
        nb = sorted(adj[v])
        pairs = list(itertools.combinations(nb, 2))
        out[v] = sum(1 for a, b in pairs if b in adj[a]) / len(pairs) if pairs else 0.0
    return out


def triangles(nodes, adj):
    return sum(1 for a, b, c in itertools.combinations(nodes, 3) if b in adj[a] and c in adj[a] and c in adj[b])


def connected_triples(nodes, adj):
    # paths of length two, counted once per centre
    return sum(1 for v in nodes for a, b in itertools.combinations(sorted(adj[v]), 2))


def path_stats(nodes, adj):
    dist = floyd_warshall(nodes, adj)
    finite = [dist[u][v] for u in nodes for v in nodes if u != v and dist[u][v] != INF]
    return max(finite), sum(finite) / len(finite), len(finite) == len(nodes) * (len(nodes) - 1)


def assortativity(adj):
    xs, ys = [], []
    for u in adj:
        for v in adj[u]:
            xs.append(len(adj[u]))
            ys.append(len(adj[v]))
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        return None
    return sxy / math.sqrt(sxx * syy)


def egonet_features(adj, v):
    """The seven NetSimile features by direct egonet enumeration."""
    deg = {u: len(adj[u]) for u in adj}
    cl = local_clustering(list(adj), adj)
    ego = {v} | adj[v]
    internal = {frozenset((a, b)) for a in ego for b in adj[a] if b in ego}
    outgoing = {frozenset((a, b)) for a in ego for b in adj[a] if b not in ego}
    frontier = {b for a in ego for b in adj[a]} - ego
    nb = adj[v]
    return (
        deg[v],
        cl[v],
        sum(deg[u] for u in nb) / len(nb) if nb else 0.0,
        sum(cl[u] for u in nb) / len(nb) if nb else 0.0,
        len(internal),
        len(outgoing),
        len(frontier),
    )


def fleiss_kappa(rows):
    """Per-subject loop; counts agreeing rater pairs directly."""
    N = len(rows)
    n = sum(rows[0])
    k = len(rows[0])
    agree = 0.0
    for row in rows:
        pairs = sum(c * (c - 1) for c in row)  # ordered agreeing pairs
        agree += pairs / (n * (n - 1))
    p_bar = agree / N
    p_e = 0.0
    for j in range(k):
        pj = sum(row[j] for row in rows) / (N * n)
        p_e += pj * pj
    return (p_bar - p_e) / (1 - p_e)


def random_directed(rng: random.Random, n_max: int = 10):
    n = rng.randint(2, n_max)
    nodes = [f"v{i:02d}" for i in range(n)]
    p = rng.choice([0.1, 0.2, 0.35, 0.5, 0.8])
    edges = [(u, v) for u in nodes for v in nodes if u != v and rng.random() < p]
    return nodes, edges


def modularity(nodes, edges, groups):
    """Double-sum form: (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j)."""
    adj = undirected(nodes, edges)
    m = sum(len(a) for a in adj.values()) / 2
    comm = {v: i for i, g in enumerate(groups) for v in g}
    total = 0.0
    for i in nodes:
        for j in nodes:
            if comm[i] == comm[j]:
                total += (1.0 if j in adj[i] else 0.0) - len(adj[i]) * len(adj[j]) / (2 * m)
    return total / (2 * m)


def set_partitions(items):
    """Every partition of ``items`` (Bell-number many)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def planted_cliques(rng: random.Random, k: int, lo: int = 3, hi: int = 6):
    """``k`` disjoint cliques with random sizes; returns (nodes, edges, groups)."""
    nodes, edges, groups = [], [], []
    for c in range(k):
        block = [f"c{c}n{i}" for i in range(rng.randint(lo, hi))]
        groups.append(block)
        nodes.extend(block)
        edges.extend((a, b) for i, a in enumerate(block) for b in block[i + 1:])
    rng.shuffle(nodes)
    return nodes, edges, groups
