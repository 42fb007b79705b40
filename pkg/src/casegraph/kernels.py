"""Hot graph kernels with a compiled core and a pure-Python fallback.

The Cython module ``_ckernels`` is used when it was built; otherwise, or when
``CASEGRAPH_PURE_PYTHON=1`` is set, ``_pykernels`` is used. Both expose the
same three functions and produce identical results.
"""

from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _pykernels
from .graph import SimpleGraph


def _select() -> tuple[ModuleType, str]:
    if os.environ.get("CASEGRAPH_PURE_PYTHON", "") not in ("", "0"):
        return _pykernels, "python"
    try:
        from . import _ckernels
    except ImportError:
        return _pykernels, "python"
    return _ckernels, "cython"


_impl, BACKEND = _select()

all_pairs_distances = _impl.all_pairs_distances
brandes = _impl.brandes
neighbor_links = _impl.neighbor_links


def available_backends() -> dict[str, ModuleType]:
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found


def to_csr(g: SimpleGraph) -> tuple[tuple[str, ...], np.ndarray, np.ndarray]:
    """Node ids (sorted) plus CSR arrays with each edge stored both ways.

    Neighbour lists are sorted by node index so every kernel visits nodes in a
    label-determined order.
    """
    ids = g.nodes
    pos = {v: i for i, v in enumerate(ids)}
    nbrs: list[list[int]] = [[] for _ in ids]
    for u, v in g.edges:
        nbrs[pos[u]].append(pos[v])
        nbrs[pos[v]].append(pos[u])
    indptr = np.zeros(len(ids) + 1, dtype=np.int64)
    flat: list[int] = []
    for i, row in enumerate(nbrs):
        row.sort()
        flat.extend(row)
        indptr[i + 1] = len(flat)
    return ids, indptr, np.asarray(flat, dtype=np.int64)
