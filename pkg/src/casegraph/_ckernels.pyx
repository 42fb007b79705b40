# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; same contract as ``casegraph._pykernels``."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def all_pairs_distances(indptr_in, indices_in):
    cdef const long long[:] indptr = np.ascontiguousarray(indptr_in, dtype=np.int64)
    cdef const long long[:] indices = np.ascontiguousarray(indices_in, dtype=np.int64)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.full((n, n), -1, dtype=np.int64)
    cdef long long[:, :] dist = out
    cdef long long[:] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t s, head, tail, k
    cdef long long v, w
    for s in range(n):
        dist[s, s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[s, w] < 0:
                    dist[s, w] = dist[s, v] + 1
                    queue[tail] = w
                    tail += 1
    return out


def brandes(indptr_in, indices_in):
    cdef const long long[:] indptr = np.ascontiguousarray(indptr_in, dtype=np.int64)
    cdef const long long[:] indices = np.ascontiguousarray(indices_in, dtype=np.int64)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t nnz = indices.shape[0]
    node_out = np.zeros(n, dtype=np.float64)
    arc_out = np.zeros(nnz, dtype=np.float64)
    cdef double[:] node_bc = node_out
    cdef double[:] arc_bc = arc_out
    cdef double[:] sigma = np.zeros(max(n, 1), dtype=np.float64)
    cdef double[:] delta = np.zeros(max(n, 1), dtype=np.float64)
    cdef long long[:] dist = np.zeros(max(n, 1), dtype=np.int64)
    cdef long long[:] order = np.zeros(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t s, i, k, head, tail
    cdef long long v, w
    cdef double c
    for s in range(n):
        for i in range(n):
            sigma[i] = 0.0
            delta[i] = 0.0
            dist[i] = -1
        sigma[s] = 1.0
        dist[s] = 0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for i in range(tail - 1, -1, -1):
            w = order[i]
            for k in range(indptr[w], indptr[w + 1]):
                v = indices[k]
                if dist[v] == dist[w] - 1:
                    c = sigma[v] / sigma[w] * (1.0 + delta[w])
                    arc_bc[k] += c
                    delta[v] += c
            if w != s:
                node_bc[w] += delta[w]
    return node_out, arc_out


def neighbor_links(indptr_in, indices_in):
    cdef const long long[:] indptr = np.ascontiguousarray(indptr_in, dtype=np.int64)
    cdef const long long[:] indices = np.ascontiguousarray(indices_in, dtype=np.int64)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.zeros(n, dtype=np.int64)
    cdef long long[:] res = out
    cdef long long[:] mark = np.full(max(n, 1), -1, dtype=np.int64)
    cdef Py_ssize_t v, k, j
    cdef long long u, links
    for v in range(n):
        for k in range(indptr[v], indptr[v + 1]):
            mark[indices[k]] = v
        links = 0
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            for j in range(indptr[u], indptr[u + 1]):
                if mark[indices[j]] == v:
                    links += 1
        res[v] = links // 2
    return out
