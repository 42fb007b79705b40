"""Session transcripts: parsing and descriptive corpus statistics.

Two input formats are accepted. The plain-text format opens a new turn on
every line starting with ``Therapist:`` or ``Patient:`` (case-insensitive);
other non-blank lines continue the current turn. The structured format is a
JSON array of ``{"speaker": ..., "text": ...}`` objects and wins whenever the
document parses as one.

Counting rules used by :func:`corpus_stats`: a word is a maximal run of
non-whitespace characters; a sentence is a maximal run of ``.``, ``!`` or
``?`` characters.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Sequence

from .errors import EmptyCorpus, EmptyUtterance, NoTurnsFound, TranscriptError, UnknownSpeakerLabel


class Speaker(str, Enum):
    THERAPIST = "therapist"
    PATIENT = "patient"


@dataclass(frozen=True)
class Turn:
    index: int
    speaker: Speaker
    text: str


@dataclass(frozen=True)
class Transcript:
    session_id: str
    turns: tuple[Turn, ...]

    def render(self) -> str:
        """One ``Speaker: text`` line per turn."""
        return "\n".join(f"{t.speaker.value.capitalize()}: {t.text}" for t in self.turns)


@dataclass(frozen=True)
class CorpusStats:
    session_count: int
    mean_words_per_session: float
    mean_sentences_per_session: float
    mean_therapist_turns: float
    mean_patient_turns: float
    mean_utterance_length_words: float

    def to_dict(self) -> dict:
        return asdict(self)


_LABEL_RE = re.compile(r"^\s*([A-Za-z]+)\s*:(.*)$")
_SENTENCE_RE = re.compile(r"[.!?]+")


def _speaker(label: str) -> Speaker | None:
    try:
        return Speaker(label.lower())
    except ValueError:
        return None


def _parse_structured(doc: list, session_id: str) -> Transcript:
    turns = []
    for i, item in enumerate(doc):
        if not isinstance(item, dict) or "speaker" not in item or "text" not in item:
            raise TranscriptError(f"item {i}: expected an object with 'speaker' and 'text'")
        speaker = _speaker(str(item["speaker"]).strip())
        if speaker is None:
            raise UnknownSpeakerLabel(str(item["speaker"]), i + 1)
        text = " ".join(str(item["text"]).split())
        if not text:
            raise EmptyUtterance(f"item {i}: empty utterance")
        turns.append(Turn(len(turns), speaker, text))
    if not turns:
        raise NoTurnsFound("structured transcript contains no turns")
    return Transcript(session_id, tuple(turns))


def parse_transcript(document: str, session_id: str) -> Transcript:
    """Parse a transcript document into turns.

    Raises:
        NoTurnsFound: no speaker-labelled line was found.
        UnknownSpeakerLabel: a line carries a label other than Therapist/Patient,
            or text appears before the first labelled line.
        EmptyUtterance: a turn ends up with no text.
    """
    stripped = document.strip()
    if stripped.startswith("["):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError:
            doc = None
        if isinstance(doc, list):
            return _parse_structured(doc, session_id)

    pending: list[tuple[Speaker, list[str], int]] = []
    for lineno, line in enumerate(document.splitlines(), start=1):
        if not line.strip():
            continue
        match = _LABEL_RE.match(line)
        if match:
            speaker = _speaker(match.group(1))
            if speaker is None:
                raise UnknownSpeakerLabel(match.group(1), lineno)
            pending.append((speaker, [match.group(2).strip()], lineno))
        elif pending:
            pending[-1][1].append(line.strip())
        else:
            raise UnknownSpeakerLabel(line.strip().split()[0], lineno)

    if not pending:
        raise NoTurnsFound(f"no speaker-labelled lines in session {session_id!r}")
    turns = []
    for speaker, parts, lineno in pending:
        text = " ".join(p for p in parts if p)
        if not text:
            raise EmptyUtterance(f"turn starting at line {lineno} has no text")
        turns.append(Turn(len(turns), speaker, text))
    return Transcript(session_id, tuple(turns))


def load_transcript(path, session_id: str | None = None) -> Transcript:
    from pathlib import Path

    path = Path(path)
    return parse_transcript(path.read_text(encoding="utf-8"), session_id or path.stem)


def count_words(text: str) -> int:
    return len(text.split())


def count_sentences(text: str) -> int:
    return len(_SENTENCE_RE.findall(text))


def corpus_stats(transcripts: Sequence[Transcript]) -> CorpusStats:
    if not transcripts:
        raise EmptyCorpus("corpus_stats needs at least one transcript")
    n = len(transcripts)
    words = sentences = therapist = patient = turns = 0
    for t in transcripts:
        for turn in t.turns:
            words += count_words(turn.text)
            sentences += count_sentences(turn.text)
            if turn.speaker is Speaker.THERAPIST:
                therapist += 1
            else:
                patient += 1
        turns += len(t.turns)
    return CorpusStats(
        session_count=n,
        mean_words_per_session=words / n,
        mean_sentences_per_session=sentences / n,
        mean_therapist_turns=therapist / n,
        mean_patient_turns=patient / n,
        mean_utterance_length_words=words / turns if turns else 0.0,
    )
