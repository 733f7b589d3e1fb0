"""Canonical JSON properties and domain round-trips.

The whole store and cache design leans on one byte form per value, so
these tests pin the byte-level rules, not just dict equality.
"""

import hashlib
import json

import pytest
from hypothesis import given, strategies as st

from vidtriage import serialize
from vidtriage.model import (
    BuzzwordHit,
    CheckworthinessResult,
    ClaimCheckResult,
    Contribution,
    DatasetRecord,
    HitSource,
    Label,
    Lexicon,
    LexiconEntry,
    ModalitySignals,
    SemanticClass,
    Stance,
)


def test_canonical_bytes_sorted_compact_utf8():
    data = {"b": 1, "a": {"z": None, "y": [1, 2]}, "t": "ærlig"}
    raw = serialize.canonical_json_bytes(data)
    assert raw == '{"a":{"y":[1,2],"z":null},"b":1,"t":"ærlig"}'.encode("utf-8")


def test_digest_is_sha256_of_canonical_bytes():
    data = {"op": "x", "payload": {"k": 3}}
    expected = hashlib.sha256(serialize.canonical_json_bytes(data)).hexdigest()
    assert serialize.digest(data) == expected


def test_key_order_does_not_change_digest():
    assert serialize.digest({"a": 1, "b": 2}) == serialize.digest({"b": 2, "a": 1})


def _sample_signals():
    return ModalitySignals(
        transcript="they said it",
        transcript_lang="en",
        overlay_text="BREAKING",
        video_summary="a crowd",
        transcript_verdict=SemanticClass.hostile,
        summary_verdict=SemanticClass.contentious_issue,
        overlay_verdict=SemanticClass.benign,
        buzzword_hits=(
            BuzzwordHit(term="deep state", surface="Deep State", source=HitSource.transcript, span=(5, 15)),
        ),
        deepfake_score=0.25,
        claim_results=(
            ClaimCheckResult(
                claim_text="the vote was rigged",
                stance=Stance.refuted,
                evidence_refs=("ref:1",),
                confidence=0.9,
            ),
        ),
        is_advertisement=False,
        weapon_detected=False,
    )


def test_signals_round_trip():
    s = _sample_signals()
    assert serialize.signals_from_dict(serialize.signals_to_dict(s)) == s


def test_result_round_trip_preserves_ledger():
    r = CheckworthinessResult(
        label=Label.checkworthy,
        score=3.0,
        threshold=2.0,
        contributions=(
            Contribution("verdict.transcript", 1.0, "transcript verdict is hostile"),
            Contribution("claim.refuted", 2.0, "1 of 1 claims refuted or disputed"),
        ),
    )
    assert serialize.result_from_dict(serialize.result_to_dict(r)) == r


def test_claim_result_round_trip_with_warning():
    c = ClaimCheckResult(
        claim_text="x", stance=Stance.no_evidence, warning="verification failed: timeout"
    )
    assert serialize.claim_result_from_dict(serialize.claim_result_to_dict(c)) == c


def test_dataset_record_round_trip():
    rec = DatasetRecord(
        video_id="v9",
        gold_label=Label.not_checkworthy,
        language="no",
        signals=_sample_signals(),
    )
    assert serialize.dataset_record_from_dict(serialize.dataset_record_to_dict(rec)) == rec


def test_lexicon_round_trip():
    lx = Lexicon(
        language="en",
        entries=(LexiconEntry("deep state", "phrase"), LexiconEntry("sheeple")),
    )
    assert serialize.lexicon_from_dict(serialize.lexicon_to_dict(lx)) == lx


def test_canonical_serialize_rejects_unregistered_types():
    with pytest.raises(TypeError):
        serialize.canonical_serialize(object())


def test_canonical_parse_accepts_bytes_and_str():
    s = _sample_signals()
    raw = serialize.canonical_serialize(s)
    assert serialize.canonical_parse(ModalitySignals, raw) == s
    assert serialize.canonical_parse(ModalitySignals, raw.decode("utf-8")) == s


verdicts = st.sampled_from(list(SemanticClass))
texts = st.one_of(st.none(), st.text(max_size=40))


@st.composite
def signals_values(draw):
    hits = draw(
        st.lists(
            st.builds(
                BuzzwordHit,
                term=st.text(min_size=1, max_size=10),
                surface=st.text(min_size=1, max_size=10),
                source=st.sampled_from(list(HitSource)),
                span=st.tuples(st.integers(0, 50), st.integers(51, 99)),
            ),
            max_size=3,
        )
    )
    claims = draw(
        st.lists(
            st.builds(
                ClaimCheckResult,
                claim_text=st.text(min_size=1, max_size=20),
                stance=st.sampled_from(list(Stance)),
                evidence_refs=st.tuples(st.text(max_size=8)),
                confidence=st.floats(0, 1, allow_nan=False),
                warning=st.one_of(st.none(), st.text(max_size=10)),
            ),
            max_size=3,
        )
    )
    return ModalitySignals(
        transcript=draw(texts),
        transcript_lang=draw(texts),
        overlay_text=draw(texts),
        video_summary=draw(texts),
        transcript_verdict=draw(verdicts),
        summary_verdict=draw(verdicts),
        overlay_verdict=draw(verdicts),
        buzzword_hits=tuple(hits),
        deepfake_score=draw(st.one_of(st.none(), st.floats(0, 1, allow_nan=False))),
        claim_results=tuple(claims),
        is_advertisement=draw(st.booleans()),
        weapon_detected=draw(st.booleans()),
    )


@given(signals_values())
def test_signals_canonical_round_trip_property(s):
    raw = serialize.canonical_serialize(s)
    back = serialize.canonical_parse(ModalitySignals, raw)
    assert back == s
    assert serialize.canonical_serialize(back) == raw
