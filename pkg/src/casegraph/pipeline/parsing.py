"""Tolerant parsing of model responses.

Models wrap JSON in prose or code fences, so the parser scans for the first
substring that decodes as a JSON object instead of requiring the whole
response to be JSON.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from ..errors import NoParsablePayload, UnparsableVerdict, WrongPayloadShape

CATEGORY_KEYS = (
    "presenting_problems",
    "predisposing_factors",
    "precipitating_factors",
    "perpetuating_factors",
)

_FENCE_RE = re.compile(r"```[a-zA-Z]*")
_DECODER = json.JSONDecoder()


def first_json_object(text: str) -> dict:
    """Return the first well-formed JSON object embedded in ``text``.

    Raises:
        NoParsablePayload: no ``{...}`` substring decodes to an object.
    """
    cleaned = _FENCE_RE.sub("", text)
    start = cleaned.find("{")
    while start != -1:
        try:
            obj, _ = _DECODER.raw_decode(cleaned, start)
        except json.JSONDecodeError:
            obj = None
        if isinstance(obj, dict):
            return obj
        start = cleaned.find("{", start + 1)
    raise NoParsablePayload(f"no JSON object in response: {text[:80]!r}")


def _dedupe(phrases: list[str]) -> list[str]:
    seen: set[str] = set()
    out = []
    for p in phrases:
        p = " ".join(p.split())
        key = p.casefold()
        if p and key not in seen:
            seen.add(key)
            out.append(p)
    return out


@dataclass
class ExtractionResult:
    presenting: list[str] = field(default_factory=list)
    predisposing: list[str] = field(default_factory=list)
    precipitating: list[str] = field(default_factory=list)
    perpetuating: list[str] = field(default_factory=list)

    def items(self):
        return [
            ("presenting", self.presenting),
            ("predisposing", self.predisposing),
            ("precipitating", self.precipitating),
            ("perpetuating", self.perpetuating),
        ]


def parse_extraction_response(response: str) -> ExtractionResult:
    """Map the four category keys of the first JSON object to phrase lists.

    A missing key gives an empty list. Blank phrases are dropped and
    duplicates within a category removed case-insensitively.

    Raises:
        NoParsablePayload: no JSON object found.
        WrongPayloadShape: a key is present but not a list of strings.
    """
    obj = first_json_object(response)
    lists = []
    for key in CATEGORY_KEYS:
        value = obj.get(key, [])
        if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
            raise WrongPayloadShape(f"{key!r} must be a list of strings")
        lists.append(_dedupe(value))
    return ExtractionResult(*lists)


_VERDICT_RE = re.compile(r"\b(true|false)\b", re.IGNORECASE)


def parse_edge_response(response: str) -> bool:
    """Verdict from a JSON payload such as ``{"answer": "TRUE"}``.

    String values are matched case-insensitively; JSON booleans are accepted.
    A payload naming both tokens is ambiguous and rejected.

    Raises:
        UnparsableVerdict
    """
    try:
        obj = first_json_object(response)
    except NoParsablePayload:
        raise UnparsableVerdict(f"no JSON payload in {response[:80]!r}") from None
    found = set()
    for value in obj.values():
        if isinstance(value, bool):
            found.add(value)
        elif isinstance(value, str):
            found.update(tok.lower() == "true" for tok in _VERDICT_RE.findall(value))
    if len(found) != 1:
        raise UnparsableVerdict(f"payload has no single TRUE/FALSE verdict: {obj!r}")
    return found.pop()
