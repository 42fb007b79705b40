"""Pairwise graph comparison and grouped aggregation over sessions."""

from __future__ import annotations

import json
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CaseGraphError, EmptyInput
from .graph import CausalGraph, load_graph
from .netsimile import netsimile_similarity
from .semantic import DEFAULT_TOP_K, EmbeddingProvider, edge_similarity, node_centrality_similarity, node_set_similarity

METRICS = ("netsimile", "mean_edge_similarity", "node_set_similarity", "node_centrality_similarity")
PAIR_ORDER = ("A vs B", "Auto vs A", "Auto vs B")
# (label, first graph file stem, second graph file stem)
PAIR_FILES = (("A vs B", "A", "B"), ("Auto vs A", "auto", "A"), ("Auto vs B", "auto", "B"))
TOTAL = "TOTAL"


@dataclass
class ComparisonReport:
    session_id: str
    pair: str = ""
    group: str = ""
    netsimile: float | None = None
    mean_edge_similarity: float | None = None
    node_set_similarity: float | None = None
    node_centrality_similarity: float | None = None
    errors: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def compare(
    g1: CausalGraph,
    g2: CausalGraph,
    provider: EmbeddingProvider,
    pair: str = "",
    group: str = "",
    k: int = DEFAULT_TOP_K,
) -> ComparisonReport:
    """All four similarity measures; a failing measure is recorded in ``errors``."""
    report = ComparisonReport(session_id=g1.session_id, pair=pair, group=group)
    measures = {
        "netsimile": lambda: netsimile_similarity(g1, g2),
        "mean_edge_similarity": lambda: edge_similarity(g1, g2, provider),
        "node_set_similarity": lambda: node_set_similarity(g1, g2, provider),
        "node_centrality_similarity": lambda: node_centrality_similarity(g1, g2, provider, k),
    }
    for name, fn in measures.items():
        try:
            setattr(report, name, fn())
        except CaseGraphError as exc:
            report.errors[name] = f"{type(exc).__name__}: {exc}"
    return report


@dataclass(frozen=True)
class Cell:
    mean: float | None
    std: float | None
    count: int


@dataclass
class AggregateSummary:
    """``rows[(group, pair)][metric]``, rows in group, pair order, TOTAL last."""

    rows: dict[tuple[str, str], dict[str, Cell]]

    def to_dict(self) -> dict:
        return {
            "columns": list(METRICS),
            "rows": [
                {"group": grp, "pair": pair,
                 **{m: {"mean": c.mean, "std": c.std, "n": c.count} for m, c in cells.items()}}
                for (grp, pair), cells in self.rows.items()
            ],
        }

    def render(self) -> str:
        head = ["Group", "Comparison"] + [f"{m} {s}" for m in METRICS for s in ("Mean", "Std.")]
        lines = ["\t".join(head)]
        last_group = None
        for (grp, pair), cells in self.rows.items():
            shown = grp if grp != last_group else ""
            last_group = grp
            vals = []
            for m in METRICS:
                for x in (cells[m].mean, cells[m].std):
                    vals.append("nan" if x is None else f"{x:.4f}")
            lines.append("\t".join([shown, pair] + vals))
        return "\n".join(lines) + "\n"


def _cell(values: list[float]) -> Cell:
    if not values:
        return Cell(None, None, 0)
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if len(values) > 1 else None
    return Cell(mean, std, len(values))


def _pair_key(pair: str) -> tuple[int, str]:
    return (PAIR_ORDER.index(pair), pair) if pair in PAIR_ORDER else (len(PAIR_ORDER), pair)


def aggregate(reports: Sequence[ComparisonReport]) -> AggregateSummary:
    """Mean and sample SD per (group, pair) cell plus a TOTAL group over all groups.

    Undefined SDs (singleton cells) and empty cells are ``None``.
    """
    if not reports:
        raise EmptyInput("no comparison reports to aggregate")
    buckets: dict[tuple[str, str], list[ComparisonReport]] = {}
    for r in reports:
        buckets.setdefault((r.group, r.pair), []).append(r)
        buckets.setdefault((TOTAL, r.pair), []).append(r)
    groups = sorted({r.group for r in reports} - {TOTAL}) + [TOTAL]
    order = sorted(buckets, key=lambda key: (groups.index(key[0]), _pair_key(key[1])))
    rows = {}
    for key in order:
        members = buckets[key]
        rows[key] = {m: _cell([getattr(r, m) for r in members if getattr(r, m) is not None]) for m in METRICS}
    return AggregateSummary(rows)


def _compare_session(path: Path, group: str, provider: EmbeddingProvider) -> list[ComparisonReport]:
    graphs = {p.stem: load_graph(p) for p in sorted(path.glob("*.json"))}
    out = []
    for label, a, b in PAIR_FILES:
        if a in graphs and b in graphs:
            rep = compare(graphs[a], graphs[b], provider, pair=label, group=group)
            rep.session_id = path.name
            out.append(rep)
    return out


def report_directory(root, provider: EmbeddingProvider, workers: int = 4) -> tuple[list[ComparisonReport], AggregateSummary]:
    """Compare every session under ``root/<group>/<session>/{A,B,auto}.json``.

    Sessions run concurrently; results are ordered by (group, session, pair).
    """
    root = Path(root)
    jobs = [
        (session, group.name)
        for group in sorted(p for p in root.iterdir() if p.is_dir())
        for session in sorted(p for p in group.iterdir() if p.is_dir())
    ]
    if not jobs:
        raise EmptyInput(f"no <group>/<session>/ directories under {root}")
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda job: _compare_session(job[0], job[1], provider), jobs))
    reports = [r for batch in results for r in batch]
    return reports, aggregate(reports)


def _clean(obj):
    if isinstance(obj, float):
        return None if math.isnan(obj) or math.isinf(obj) else obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    """Canonical JSON: sorted keys, NaN/inf as null, trailing newline."""
    return json.dumps(_clean(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def reports_document(reports: Iterable[ComparisonReport], summary: AggregateSummary) -> dict:
    return {"sessions": [r.to_dict() for r in reports], "summary": summary.to_dict()}
