import json

import pytest

from casegraph.errors import EmptyCorpus, EmptyUtterance, NoTurnsFound, UnknownSpeakerLabel
from casegraph.transcript import Speaker, Transcript, Turn, corpus_stats, load_transcript, parse_transcript


def test_two_turns():
    t = parse_transcript("Therapist: Hello.\nPatient: Hi.", "s")
    assert [x.speaker for x in t.turns] == [Speaker.THERAPIST, Speaker.PATIENT]
    assert [x.text for x in t.turns] == ["Hello.", "Hi."]


def test_unknown_label():
    with pytest.raises(UnknownSpeakerLabel) as info:
        parse_transcript("Counselor: Hello.", "s")
    assert info.value.line == 1


def test_unknown_label_mid_document():
    with pytest.raises(UnknownSpeakerLabel) as info:
        parse_transcript("Therapist: Hi.\nNote: this is odd", "s")
    assert info.value.line == 2


def test_continuation_lines_join():
    t = parse_transcript("Therapist: So?\nPatient: first line\nsecond line\n  third line", "s")
    assert len(t.turns) == 2
    assert t.turns[1].text == "first line second line third line"


def test_labels_case_insensitive():
    t = parse_transcript("THERAPIST: a\npatient: b", "s")
    assert [x.speaker for x in t.turns] == [Speaker.THERAPIST, Speaker.PATIENT]


def test_no_turns():
    with pytest.raises(NoTurnsFound):
        parse_transcript("\n\n", "s")


def test_empty_utterance():
    with pytest.raises(EmptyUtterance):
        parse_transcript("Therapist:\nPatient: hi", "s")


def test_structured_form():
    doc = json.dumps([{"speaker": "Therapist", "text": "Hello."}, {"speaker": "patient", "text": "Hi."}])
    t = parse_transcript(doc, "s")
    assert t == parse_transcript("Therapist: Hello.\nPatient: Hi.", "s")


def test_load_uses_stem(data_dir):
    t = load_transcript(data_dir / "fig1_transcript.txt")
    assert t.session_id == "fig1_transcript"
    assert len(t.turns) == 15


def _one():
    return Transcript("s", (Turn(0, Speaker.PATIENT, "Hi."), Turn(1, Speaker.THERAPIST, "Hello there.")))


def test_stats_hand_count():
    s = corpus_stats([_one()])
    assert s.session_count == 1
    assert s.mean_words_per_session == 3
    assert s.mean_sentences_per_session == 2
    assert s.mean_patient_turns == 1
    assert s.mean_therapist_turns == 1
    assert s.mean_utterance_length_words == 1.5


def test_stats_identical_pair():
    one = corpus_stats([_one()]).to_dict()
    two = corpus_stats([_one(), _one()]).to_dict()
    one.pop("session_count")
    two.pop("session_count")
    assert one == two


def test_stats_empty():
    with pytest.raises(EmptyCorpus):
        corpus_stats([])
