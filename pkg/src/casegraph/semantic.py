"""Embedding-based similarity between the contents of two causal graphs."""

from __future__ import annotations

import hashlib
import json
import threading
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .errors import ConfigError, EdgelessGraph, EmptyGraph, UnknownEdge, ZeroMeanVector
from .graph import CausalEdge, CausalGraph, degree_sequences

EDGE_TEMPLATE = "{source} causes {target}"
DEFAULT_TOP_K = 5


class EmbeddingProvider(Protocol):
    def embed(self, text: str) -> np.ndarray:
        """Unit-norm vector of fixed dimension, deterministic per text."""
        ...


def _unit(v: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ZeroMeanVector("cannot normalise a zero vector")
    return v / norm


class HashEmbedding:
    """Pseudo-random unit vectors seeded by a SHA-256 of the text.

    Stable across processes and platforms. Distinct texts get nearly
    orthogonal vectors for large ``dim``; identical texts get identical ones.
    """

    def __init__(self, dim: int = 64, salt: str = ""):
        self.dim = dim
        self.salt = salt

    def embed(self, text: str) -> np.ndarray:
        digest = hashlib.sha256((self.salt + text).encode("utf-8")).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:16], "little"))
        return _unit(rng.standard_normal(self.dim))


class TableEmbedding:
    """Embeddings looked up from a fixed table; rows are normalised on load."""

    def __init__(self, table: dict[str, Sequence[float]]):
        dims = {len(v) for v in table.values()}
        if len(dims) > 1:
            raise ConfigError(f"embedding table mixes dimensions {sorted(dims)}")
        self.table = {k: _unit(np.asarray(v, dtype=np.float64)) for k, v in table.items()}

    @classmethod
    def from_file(cls, path) -> "TableEmbedding":
        """Read lines of ``text<TAB>v1,v2,...,vd``."""
        table = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                text, vec = line.rsplit("\t", 1)
                table[text] = [float(x) for x in vec.split(",")]
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: expected 'text<TAB>v1,...,vd'") from None
        return cls(table)

    def embed(self, text: str) -> np.ndarray:
        try:
            return self.table[text]
        except KeyError:
            raise ConfigError(f"no embedding for {text!r} in fixture table") from None


class HttpEmbedding:
    """Remote embedding endpoint.

    Sends ``{"model": ..., "input": text}`` and accepts either
    ``{"embedding": [...]}`` or ``{"data": [{"embedding": [...]}]}``.
    """

    def __init__(self, endpoint: str, model: str = "", api_key: str | None = None, timeout: float = 30.0):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout = timeout

    def embed(self, text: str) -> np.ndarray:
        body = json.dumps({"model": self.model, "input": text}).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        req = urllib.request.Request(self.endpoint, data=body, headers=headers, method="POST")
        with urllib.request.urlopen(req, timeout=self.timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8"))
        vec = payload.get("embedding")
        if vec is None:
            vec = payload["data"][0]["embedding"]
        return _unit(np.asarray(vec, dtype=np.float64))


class CachedProvider:
    """Thread-safe per-run cache keyed by exact text."""

    def __init__(self, inner: EmbeddingProvider):
        self.inner = inner
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def embed(self, text: str) -> np.ndarray:
        with self._lock:
            hit = self._cache.get(text)
        if hit is not None:
            return hit
        vec = self.inner.embed(text)
        with self._lock:
            return self._cache.setdefault(text, vec)


# ---------------------------------------------------------------------------


def edge_text(e: CausalEdge, g: CausalGraph, template: str = EDGE_TEMPLATE) -> str:
    if e.source not in g or e.target not in g or e not in g.edges:
        raise UnknownEdge(f"edge {e.source!r} -> {e.target!r} is not in graph {g.session_id!r}")
    return template.format(source=g.node(e.source).label, target=g.node(e.target).label)


@dataclass(frozen=True)
class Match:
    direction: str  # "a->b" or "b->a"
    text: str
    matched: str
    cosine: float


@dataclass
class SimilarityBreakdown:
    edge_similarity: float | None
    node_set_similarity: float | None
    node_centrality_similarity: float | None
    edge_matches: list[Match] = field(default_factory=list)


def _best_match(texts_a: list[str], texts_b: list[str], provider: EmbeddingProvider) -> tuple[float, list[Match]]:
    """Mean over both directions of the mean best cosine match."""
    ea = np.array([provider.embed(t) for t in texts_a])
    eb = np.array([provider.embed(t) for t in texts_b])
    sims = ea @ eb.T
    rows: list[Match] = []
    for i, t in enumerate(texts_a):
        j = int(np.argmax(sims[i]))
        rows.append(Match("a->b", t, texts_b[j], float(sims[i, j])))
    for j, t in enumerate(texts_b):
        i = int(np.argmax(sims[:, j]))
        rows.append(Match("b->a", t, texts_a[i], float(sims[i, j])))
    forward = float(np.mean(sims.max(axis=1)))
    backward = float(np.mean(sims.max(axis=0)))
    return (forward + backward) / 2.0, rows


def edge_similarity_detail(
    g1: CausalGraph, g2: CausalGraph, provider: EmbeddingProvider, template: str = EDGE_TEMPLATE
) -> tuple[float, list[Match]]:
    if g1.m == 0 or g2.m == 0:
        raise EdgelessGraph("edge similarity needs at least one edge on each side")
    texts_a = [edge_text(e, g1, template) for e in g1.edges]
    texts_b = [edge_text(e, g2, template) for e in g2.edges]
    return _best_match(texts_a, texts_b, provider)


def edge_similarity(g1: CausalGraph, g2: CausalGraph, provider: EmbeddingProvider, template: str = EDGE_TEMPLATE) -> float:
    """Symmetrised mean best-match cosine between verbalised edges."""
    return edge_similarity_detail(g1, g2, provider, template)[0]


def node_set_similarity(g1: CausalGraph, g2: CausalGraph, provider: EmbeddingProvider) -> float:
    """Cosine between the mean node-label embeddings of the two graphs."""
    if g1.n == 0 or g2.n == 0:
        raise EmptyGraph("node set similarity needs nodes on both sides")
    means = []
    for g in (g1, g2):
        mean = np.mean([provider.embed(v.label) for v in g.nodes], axis=0)
        norm = float(np.linalg.norm(mean))
        if norm < 1e-12:
            raise ZeroMeanVector(f"mean node embedding of {g.session_id!r} is zero")
        means.append(mean / norm)
    return float(np.clip(means[0] @ means[1], -1.0, 1.0))


def top_nodes(g: CausalGraph, k: int) -> list[str]:
    """Ids of the ``min(k, n)`` highest total-degree nodes, ties by id."""
    degrees = degree_sequences(g)
    ranked = sorted(g.node_ids, key=lambda v: (-degrees[v][2], v))
    return ranked[: min(k, g.n)]


def node_centrality_similarity(
    g1: CausalGraph, g2: CausalGraph, provider: EmbeddingProvider, k: int = DEFAULT_TOP_K
) -> float:
    if g1.n == 0 or g2.n == 0:
        raise EmptyGraph("node centrality similarity needs nodes on both sides")
    if k < 1:
        raise ValueError("k must be at least 1")
    labels_a = [g1.node(v).label for v in top_nodes(g1, k)]
    labels_b = [g2.node(v).label for v in top_nodes(g2, k)]
    return _best_match(labels_a, labels_b, provider)[0]


def similarity_breakdown(
    g1: CausalGraph, g2: CausalGraph, provider: EmbeddingProvider, k: int = DEFAULT_TOP_K
) -> SimilarityBreakdown:
    """All three measures; a measure that is undefined for the inputs is ``None``."""
    try:
        edge_sim, rows = edge_similarity_detail(g1, g2, provider)
    except EdgelessGraph:
        edge_sim, rows = None, []
    try:
        node_sim = node_set_similarity(g1, g2, provider)
    except (EmptyGraph, ZeroMeanVector):
        node_sim = None
    try:
        cent_sim = node_centrality_similarity(g1, g2, provider, k)
    except EmptyGraph:
        cent_sim = None
    return SimilarityBreakdown(edge_sim, node_sim, cent_sim, rows)


def make_provider(spec: str) -> EmbeddingProvider:
    """Provider from a CLI spec: ``mock``, ``hash[:dim]``, ``fixture:<path>`` or ``http:<url>``."""
    import os

    if spec in ("mock", "hash"):
        return CachedProvider(HashEmbedding())
    if spec.startswith("hash:"):
        return CachedProvider(HashEmbedding(dim=int(spec.split(":", 1)[1])))
    if spec.startswith("fixture:"):
        return TableEmbedding.from_file(spec.split(":", 1)[1])
    if spec.startswith(("http:", "https:")):
        url = spec if "//" in spec else spec.split(":", 1)[1]
        return CachedProvider(
            HttpEmbedding(url, os.environ.get("CASEGRAPH_EMBED_MODEL", ""), os.environ.get("CASEGRAPH_EMBED_API_KEY"))
        )
    raise ConfigError(f"unknown embedder spec {spec!r}")
