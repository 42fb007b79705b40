from .backends import BackendConfig, ChatBackend, HttpChatBackend, ScriptedBackend, load_backend
from .generate import (
    EdgeQuery,
    enumerate_candidate_pairs,
    extract_nodes,
    generate_graph,
    judge_pairs,
    verify_edges,
)
from .parsing import ExtractionResult, parse_edge_response, parse_extraction_response
from .prompts import build_edge_prompt, build_extraction_prompt

__all__ = [
    "BackendConfig",
    "ChatBackend",
    "EdgeQuery",
    "ExtractionResult",
    "HttpChatBackend",
    "ScriptedBackend",
    "build_edge_prompt",
    "build_extraction_prompt",
    "enumerate_candidate_pairs",
    "extract_nodes",
    "generate_graph",
    "judge_pairs",
    "load_backend",
    "parse_edge_response",
    "parse_extraction_response",
    "verify_edges",
]
