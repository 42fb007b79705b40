"""Pure-Python graph kernels; reference implementation of ``_ckernels``.

All kernels take an undirected simple graph in CSR form (``indptr``,
``indices``) with every edge stored in both directions.
"""

from collections import deque

import numpy as np


def all_pairs_distances(indptr, indices):
    """BFS hop distances; ``-1`` marks unreachable pairs."""
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    n = len(indptr) - 1
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        row = [-1] * n
        row[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if row[w] < 0:
                    row[w] = row[v] + 1
                    queue.append(w)
        dist[s] = row
    return dist


def brandes(indptr, indices):
    """Shortest-path betweenness accumulated over every source.

    Returns ``(node, arc)``: node dependencies and per-arc (CSR slot)
    dependencies. Each unordered pair is counted from both ends, so callers
    halve the node values and sum the two arcs of an edge then halve.
    """
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    n = len(indptr) - 1
    node_bc = [0.0] * n
    arc_bc = [0.0] * len(indices)
    for s in range(n):
        order = []
        sigma = [0.0] * n
        dist = [-1] * n
        sigma[s] = 1.0
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        delta = [0.0] * n
        for w in reversed(order):
            # predecessors of w are neighbours one hop closer to s
            for k in range(indptr[w], indptr[w + 1]):
                v = indices[k]
                if dist[v] == dist[w] - 1:
                    c = sigma[v] / sigma[w] * (1.0 + delta[w])
                    arc_bc[k] += c
                    delta[v] += c
            if w != s:
                node_bc[w] += delta[w]
    return np.array(node_bc, dtype=np.float64), np.array(arc_bc, dtype=np.float64)


def neighbor_links(indptr, indices):
    """Number of edges among the neighbours of each node."""
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    n = len(indptr) - 1
    out = np.zeros(n, dtype=np.int64)
    mark = [-1] * n
    for v in range(n):
        for k in range(indptr[v], indptr[v + 1]):
            mark[indices[k]] = v
        links = 0
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            for j in range(indptr[u], indptr[u + 1]):
                if mark[indices[j]] == v:
                    links += 1
        out[v] = links // 2
    return out
