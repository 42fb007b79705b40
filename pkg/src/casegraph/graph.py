"""Causal-graph data model, validation, projections and serialization."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Sequence
from xml.etree import ElementTree as ET

from .errors import (
    DanglingEdgeEndpoint,
    DuplicateEdge,
    DuplicateNodeId,
    EmptyLabel,
    MalformedDocument,
    SchemaViolation,
    SelfLoop,
)


class FactorCategory(str, Enum):
    """The five 5P categories. Generation never emits ``PROTECTIVE``."""

    PRESENTING = "presenting"
    PREDISPOSING = "predisposing"
    PRECIPITATING = "precipitating"
    PERPETUATING = "perpetuating"
    PROTECTIVE = "protective"


# the four categories used by generation and the connectivity table
CORE_CATEGORIES = (
    FactorCategory.PRESENTING,
    FactorCategory.PREDISPOSING,
    FactorCategory.PRECIPITATING,
    FactorCategory.PERPETUATING,
)


class Origin(str, Enum):
    HUMAN = "human"
    AUTOMATED = "automated"


@dataclass(frozen=True)
class FactorNode:
    id: str
    label: str
    category: FactorCategory
    provenance: tuple[int, ...] = ()


@dataclass(frozen=True)
class CausalEdge:
    source: str
    target: str
    provenance: tuple[int, ...] = ()

    @property
    def key(self) -> tuple[str, str]:
        return (self.source, self.target)


@dataclass(frozen=True)
class CausalGraph:
    """Validated, immutable causal graph. Build it with :func:`build_graph`."""

    session_id: str
    nodes: tuple[FactorNode, ...]
    edges: tuple[CausalEdge, ...]
    origin: Origin = Origin.HUMAN
    annotator_id: str | None = None
    _index: dict[str, FactorNode] = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.nodes)

    def node(self, node_id: str) -> FactorNode:
        return self._index[node_id]

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._index


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph over string node ids.

    ``edges`` holds each undirected edge once as a sorted ``(u, v)`` pair.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    @classmethod
    def from_edges(cls, nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> "SimpleGraph":
        node_set = set(nodes)
        pairs = set()
        for u, v in edges:
            if u == v:
                raise SelfLoop(f"self-loop on {u!r}")
            if u not in node_set or v not in node_set:
                raise DanglingEdgeEndpoint(f"edge ({u!r}, {v!r}) has an unknown endpoint")
            pairs.add((u, v) if u < v else (v, u))
        return cls(tuple(sorted(node_set)), tuple(sorted(pairs)))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def build_graph(
    session_id: str,
    nodes: Sequence[FactorNode],
    edges: Sequence[CausalEdge],
    origin: Origin | str = Origin.HUMAN,
    annotator_id: str | None = None,
) -> CausalGraph:
    """Validate nodes and edges and return a canonically ordered graph.

    Raises:
        EmptyLabel, DuplicateNodeId, SelfLoop, DuplicateEdge, DanglingEdgeEndpoint
    """
    index: dict[str, FactorNode] = {}
    for node in nodes:
        if not node.label or not node.label.strip():
            raise EmptyLabel(f"node {node.id!r} has an empty label")
        if node.id in index:
            raise DuplicateNodeId(f"duplicate node id {node.id!r}")
        index[node.id] = node
    seen: set[tuple[str, str]] = set()
    for edge in edges:
        if edge.source == edge.target:
            raise SelfLoop(f"self-loop on {edge.source!r}")
        for end in (edge.source, edge.target):
            if end not in index:
                raise DanglingEdgeEndpoint(
                    f"edge {edge.source!r} -> {edge.target!r}: unknown node {end!r}"
                )
        if edge.key in seen:
            raise DuplicateEdge(f"duplicate edge {edge.source!r} -> {edge.target!r}")
        seen.add(edge.key)
    ordered_nodes = tuple(sorted(index.values(), key=lambda v: v.id))
    ordered_edges = tuple(sorted(edges, key=lambda e: e.key))
    return CausalGraph(
        session_id=session_id,
        nodes=ordered_nodes,
        edges=ordered_edges,
        origin=Origin(origin),
        annotator_id=annotator_id,
        _index={v.id: v for v in ordered_nodes},
    )


def undirected_projection(g: CausalGraph) -> SimpleGraph:
    """Drop edge direction; antiparallel pairs collapse to one edge."""
    return SimpleGraph.from_edges(g.node_ids, (e.key for e in g.edges))


def degree_sequences(g: CausalGraph) -> dict[str, tuple[int, int, int]]:
    """Map node id to ``(in_degree, out_degree, total_degree)`` on the directed graph."""
    indeg = dict.fromkeys(g.node_ids, 0)
    outdeg = dict.fromkeys(g.node_ids, 0)
    for e in g.edges:
        outdeg[e.source] += 1
        indeg[e.target] += 1
    return {v: (indeg[v], outdeg[v], indeg[v] + outdeg[v]) for v in g.node_ids}


_SLUG_RE = re.compile(r"[^a-z0-9]+")


def slugify(label: str) -> str:
    slug = _SLUG_RE.sub("-", label.lower()).strip("-")
    return slug or "node"


def make_node_id(label: str, taken: set[str]) -> str:
    """Slug of ``label``, suffixed ``-2``, ``-3``... until unused in ``taken``."""
    base = slugify(label)
    candidate, k = base, 1
    while candidate in taken:
        k += 1
        candidate = f"{base}-{k}"
    return candidate


# ---------------------------------------------------------------------------
# JSON document


def to_document(g: CausalGraph) -> dict[str, Any]:
    return {
        "session_id": g.session_id,
        "origin": g.origin.value,
        "annotator_id": g.annotator_id,
        "nodes": [
            {"id": v.id, "label": v.label, "category": v.category.value, "provenance": list(v.provenance)}
            for v in g.nodes
        ],
        "edges": [
            {"source": e.source, "target": e.target, "provenance": list(e.provenance)}
            for e in g.edges
        ],
    }


def serialize(g: CausalGraph) -> str:
    """Canonical JSON text: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(to_document(g), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _require(obj: dict, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if key not in obj:
        raise SchemaViolation(f"{where}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise SchemaViolation(f"{where}: field {key!r} has type {type(value).__name__}")
    return value


def _provenance(obj: dict, where: str) -> tuple[int, ...]:
    raw = obj.get("provenance", [])
    if raw is None:
        return ()
    if not isinstance(raw, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in raw):
        raise SchemaViolation(f"{where}: provenance must be a list of integers")
    return tuple(raw)


def from_document(doc: Any) -> CausalGraph:
    if not isinstance(doc, dict):
        raise SchemaViolation("document root must be an object")
    session_id = _require(doc, "session_id", str, "document")
    origin_raw = _require(doc, "origin", str, "document")
    try:
        origin = Origin(origin_raw)
    except ValueError:
        raise SchemaViolation(f"document: unknown origin {origin_raw!r}") from None
    annotator_id = doc.get("annotator_id")
    if annotator_id is not None and not isinstance(annotator_id, str):
        raise SchemaViolation("document: annotator_id must be a string or null")

    nodes = []
    for i, raw in enumerate(_require(doc, "nodes", list, "document")):
        where = f"nodes[{i}]"
        if not isinstance(raw, dict):
            raise SchemaViolation(f"{where}: must be an object")
        cat_raw = _require(raw, "category", str, where)
        try:
            category = FactorCategory(cat_raw.lower())
        except ValueError:
            raise SchemaViolation(f"{where}: unknown category {cat_raw!r}") from None
        nodes.append(
            FactorNode(
                id=_require(raw, "id", str, where),
                label=_require(raw, "label", str, where),
                category=category,
                provenance=_provenance(raw, where),
            )
        )
    edges = []
    for i, raw in enumerate(_require(doc, "edges", list, "document")):
        where = f"edges[{i}]"
        if not isinstance(raw, dict):
            raise SchemaViolation(f"{where}: must be an object")
        edges.append(
            CausalEdge(
                source=_require(raw, "source", str, where),
                target=_require(raw, "target", str, where),
                provenance=_provenance(raw, where),
            )
        )
    return build_graph(session_id, nodes, edges, origin, annotator_id)


def deserialize(text: str) -> CausalGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_document(doc)


def load_graph(path) -> CausalGraph:
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read())


# ---------------------------------------------------------------------------
# exports


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(g: CausalGraph) -> str:
    lines = [f"digraph {_dot_quote(g.session_id)} {{"]
    for v in g.nodes:
        lines.append(
            f"  {_dot_quote(v.id)} [label={_dot_quote(v.label)}, category={_dot_quote(v.category.value)}];"
        )
    for e in g.edges:
        lines.append(f"  {_dot_quote(e.source)} -> {_dot_quote(e.target)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def to_graphml(g: CausalGraph) -> str:
    root = ET.Element("graphml", xmlns=_GRAPHML_NS)
    ET.SubElement(root, "key", {"id": "label", "for": "node", "attr.name": "label", "attr.type": "string"})
    ET.SubElement(
        root, "key", {"id": "category", "for": "node", "attr.name": "category", "attr.type": "string"}
    )
    graph = ET.SubElement(root, "graph", id=g.session_id, edgedefault="directed")
    for v in g.nodes:
        el = ET.SubElement(graph, "node", id=v.id)
        ET.SubElement(el, "data", key="label").text = v.label
        ET.SubElement(el, "data", key="category").text = v.category.value
    for i, e in enumerate(g.edges):
        ET.SubElement(graph, "edge", id=f"e{i}", source=e.source, target=e.target)
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def export(g: CausalGraph, fmt: str) -> str:
    fmt = fmt.lower()
    if fmt == "dot":
        return to_dot(g)
    if fmt == "graphml":
        return to_graphml(g)
    raise ValueError(f"unknown export format {fmt!r}")
