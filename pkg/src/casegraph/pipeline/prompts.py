"""Prompt templates for factor extraction and pairwise edge verification."""

from __future__ import annotations

from typing import Sequence

from ..graph import FactorNode
from ..transcript import Transcript

EXTRACTION_TEMPLATE = """\
You are a clinical psychologist preparing a case formulation using the 5P framework.
Identify the patient's presenting problems, predisposing factors, precipitating factors, \
and perpetuating factors from the conversation below.
Use short phrases taken as closely as possible from the conversation.
Respond only in JSON format with exactly these four keys, each mapped to a list of strings:
{{"presenting_problems": [], "predisposing_factors": [], "precipitating_factors": [], "perpetuating_factors": []}}

Conversation:
<<<
{conversation}
>>>
"""

EDGE_TEMPLATE = """\
You are a clinical psychologist building a causal case formulation graph.
Using the full conversation below, decide whether the first factor directly causes the second.

Conversation:
<<<
{conversation}
>>>

Causal links accepted so far:
{known}

Cause factor ({source_category}): {source}
Effect factor ({target_category}): {target}
QUESTION: Does "{source}" cause "{target}"?
Respond only in JSON format as {{"answer": "TRUE"}} or {{"answer": "FALSE"}}.
"""

NO_EDGES_MARKER = "(none so far)"


def question_line(source_label: str, target_label: str) -> str:
    """The line of an edge prompt that identifies the pair; used by scripted backends."""
    return f'QUESTION: Does "{source_label}" cause "{target_label}"?'


def build_extraction_prompt(t: Transcript) -> str:
    return EXTRACTION_TEMPLATE.format(conversation=t.render())


def build_edge_prompt(
    source: FactorNode,
    target: FactorNode,
    t: Transcript,
    known_edges: Sequence[tuple[str, str]],
) -> str:
    """Prompt asking whether ``source`` causes ``target``.

    ``known_edges`` are (cause label, effect label) pairs already accepted;
    they are rendered in the order given, which callers keep canonical.
    """
    if known_edges:
        known = "\n".join(f"- {a} -> {b}" for a, b in known_edges)
    else:
        known = NO_EDGES_MARKER
    return EDGE_TEMPLATE.format(
        conversation=t.render(),
        known=known,
        source=source.label,
        target=target.label,
        source_category=source.category.value,
        target_category=target.category.value,
    )
