"""Two-stage graph generation: factor extraction, then pairwise edge checks."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from ..errors import (
    BackendError,
    BackendUnavailable,
    ExtractionFailed,
    NoParsablePayload,
    NoTurnsFound,
    UnparsableVerdict,
    WrongPayloadShape,
)
from ..graph import CausalEdge, CausalGraph, FactorCategory, FactorNode, Origin, build_graph, make_node_id
from ..transcript import Transcript
from .backends import BackendConfig, ChatBackend
from .parsing import parse_edge_response, parse_extraction_response
from .prompts import build_edge_prompt, build_extraction_prompt

log = logging.getLogger(__name__)


@dataclass
class EdgeQuery:
    source: FactorNode
    target: FactorNode
    verdict: bool | None = None
    attempts: int = 0
    reissued: bool = False


def _call(backend: ChatBackend, prompt: str, cfg: BackendConfig, what: str) -> str:
    last: Exception | None = None
    for _ in range(cfg.max_retries + 1):
        try:
            return backend.complete(prompt)
        except BackendError as exc:
            last = exc
            log.warning("backend call failed for %s: %s", what, exc)
    raise BackendUnavailable(f"{what}: backend failed {cfg.max_retries + 1} times: {last}")


def extract_nodes(t: Transcript, backend: ChatBackend, cfg: BackendConfig) -> list[FactorNode]:
    """Stage one: a single extraction call (retried on parse failure).

    Phrases repeated across categories keep their first category in the
    order presenting, predisposing, precipitating, perpetuating.
    """
    if not t.turns:
        raise NoTurnsFound(f"transcript {t.session_id!r} has no turns")
    prompt = build_extraction_prompt(t)
    result = None
    for attempt in range(1, cfg.max_retries + 2):
        response = _call(backend, prompt, cfg, "factor extraction")
        try:
            result = parse_extraction_response(response)
            break
        except (NoParsablePayload, WrongPayloadShape) as exc:
            log.warning("extraction attempt %d unparsable: %s", attempt, exc)
    if result is None:
        raise ExtractionFailed(f"no usable extraction after {cfg.max_retries + 1} attempts")

    nodes: list[FactorNode] = []
    first_seen: dict[str, FactorCategory] = {}
    taken: set[str] = set()
    for cat_name, phrases in result.items():
        category = FactorCategory(cat_name)
        for phrase in phrases:
            key = phrase.casefold()
            if key in first_seen:
                log.warning(
                    "factor %r listed as %s and %s; keeping %s",
                    phrase, first_seen[key].value, category.value, first_seen[key].value,
                )
                continue
            first_seen[key] = category
            node_id = make_node_id(phrase, taken)
            taken.add(node_id)
            nodes.append(FactorNode(node_id, phrase, category))
    return sorted(nodes, key=lambda v: v.id)


def enumerate_candidate_pairs(
    nodes: Sequence[FactorNode], include_within_category: bool = False
) -> list[tuple[FactorNode, FactorNode]]:
    """Ordered pairs to verify, sorted by ``(source.id, target.id)``."""
    ordered = sorted(nodes, key=lambda v: v.id)
    return [
        (u, v)
        for u in ordered
        for v in ordered
        if u.id != v.id and (include_within_category or u.category != v.category)
    ]


def _judge(q: EdgeQuery, t: Transcript, known: tuple[tuple[str, str], ...], backend, cfg) -> EdgeQuery:
    prompt = build_edge_prompt(q.source, q.target, t, known)
    what = f"edge {q.source.id} -> {q.target.id}"
    result = EdgeQuery(q.source, q.target)
    for attempt in range(1, cfg.max_retries + 2):
        result.attempts = attempt
        response = _call(backend, prompt, cfg, what)
        try:
            result.verdict = parse_edge_response(response)
            return result
        except UnparsableVerdict as exc:
            log.warning("%s attempt %d unparsable: %s", what, attempt, exc)
    log.warning("%s: no verdict after %d attempts; treating as FALSE", what, result.attempts)
    result.verdict = False
    return result


def judge_pairs(
    nodes: Sequence[FactorNode],
    t: Transcript,
    backend: ChatBackend,
    cfg: BackendConfig,
    include_within_category: bool = False,
) -> list[EdgeQuery]:
    """Ask the backend about every candidate pair, keeping a running edge list.

    Each prompt lists the edges accepted among pairs earlier in canonical
    order, exactly as a sequential loop would. With ``parallelism > 1`` later
    pairs are dispatched speculatively with the list known at dispatch time;
    if an earlier pair is accepted meanwhile the stale answer is discarded and
    the pair is asked again with the correct list, so the outcome never
    depends on ``parallelism``.
    """
    pairs = enumerate_candidate_pairs(nodes, include_within_category)
    queries = [EdgeQuery(s, d) for s, d in pairs]
    accepted: list[tuple[str, str]] = []
    results: list[EdgeQuery] = []
    width = cfg.parallelism
    with ThreadPoolExecutor(max_workers=width) as pool:
        inflight: dict[int, tuple[tuple, object]] = {}
        dispatched = 0
        for k, q in enumerate(queries):
            while dispatched < len(queries) and dispatched < k + width:
                snapshot = tuple(accepted)
                inflight[dispatched] = (
                    snapshot,
                    pool.submit(_judge, queries[dispatched], t, snapshot, backend, cfg),
                )
                dispatched += 1
            snapshot, future = inflight.pop(k)
            done = future.result()
            if snapshot != tuple(accepted):
                done = _judge(q, t, tuple(accepted), backend, cfg)
                done.reissued = True
            if done.verdict:
                accepted.append((q.source.label, q.target.label))
            results.append(done)
    return results


def verify_edges(
    nodes: Sequence[FactorNode],
    t: Transcript,
    backend: ChatBackend,
    cfg: BackendConfig,
    include_within_category: bool = False,
) -> list[CausalEdge]:
    """Stage two: the accepted edges, canonically ordered."""
    queries = judge_pairs(nodes, t, backend, cfg, include_within_category)
    edges = [CausalEdge(q.source.id, q.target.id) for q in queries if q.verdict]
    return sorted(edges, key=lambda e: e.key)


def generate_graph(
    t: Transcript,
    backend: ChatBackend,
    cfg: BackendConfig,
    include_within_category: bool = False,
) -> CausalGraph:
    if not t.turns:
        raise NoTurnsFound(f"transcript {t.session_id!r} has no turns")
    nodes = extract_nodes(t, backend, cfg)
    edges = verify_edges(nodes, t, backend, cfg, include_within_category) if nodes else []
    return build_graph(t.session_id, nodes, edges, Origin.AUTOMATED)
