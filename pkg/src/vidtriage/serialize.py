"""Canonical serialization for all domain types.

One encoding rule for the whole project: UTF-8 JSON with sorted keys,
compact separators, and every field present (absent optionals are
``null``). That makes encodings byte-stable, which golden-file tests and
the content-addressed store both rely on: equal values always serialize
to equal bytes, and ``dumps(parse(s)) == s`` for any canonical ``s``.

Binary fields (frame images) are carried as base64 under a ``*_b64`` key.
"""

from __future__ import annotations

import base64
import hashlib
import json
from typing import Any

from .model import (
    BuzzwordHit,
    CheckworthinessResult,
    ClaimCheckResult,
    Contribution,
    DatasetRecord,
    FrameSample,
    HitSource,
    Label,
    Lexicon,
    LexiconEntry,
    MediaBundle,
    ModalitySignals,
    SemanticClass,
    Stance,
    VideoItem,
)


def canonical_json_bytes(data: Any) -> bytes:
    """Encode a jsonable structure with the canonical byte rules."""
    return json.dumps(data, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def digest(data: Any) -> str:
    """Hex sha256 of the canonical encoding. Used for cache and fixture keys."""
    return hashlib.sha256(canonical_json_bytes(data)).hexdigest()


# ---------------------------------------------------------------------------
# per-type converters: value -> plain dict and back


def video_item_to_dict(v: VideoItem) -> dict:
    return {
        "id": v.id,
        "source": v.source,
        "duration_s": v.duration_s,
        "language_hint": v.language_hint,
        "title": v.title,
        "description": v.description,
    }


def video_item_from_dict(d: dict) -> VideoItem:
    return VideoItem(
        id=d["id"],
        source=d["source"],
        duration_s=float(d["duration_s"]),
        language_hint=d.get("language_hint"),
        title=d.get("title"),
        description=d.get("description"),
    )


def buzzword_hit_to_dict(h: BuzzwordHit) -> dict:
    return {
        "term": h.term,
        "surface": h.surface,
        "source": h.source.value,
        "span": [h.span[0], h.span[1]],
    }


def buzzword_hit_from_dict(d: dict) -> BuzzwordHit:
    return BuzzwordHit(
        term=d["term"],
        surface=d["surface"],
        source=HitSource(d["source"]),
        span=(int(d["span"][0]), int(d["span"][1])),
    )


def claim_result_to_dict(c: ClaimCheckResult) -> dict:
    return {
        "claim_text": c.claim_text,
        "stance": c.stance.value,
        "evidence_refs": list(c.evidence_refs),
        "confidence": c.confidence,
        "warning": c.warning,
    }


def claim_result_from_dict(d: dict) -> ClaimCheckResult:
    return ClaimCheckResult(
        claim_text=d["claim_text"],
        stance=Stance(d["stance"]),
        evidence_refs=tuple(d.get("evidence_refs") or ()),
        confidence=float(d.get("confidence", 0.0)),
        warning=d.get("warning"),
    )


def signals_to_dict(s: ModalitySignals) -> dict:
    return {
        "transcript": s.transcript,
        "transcript_lang": s.transcript_lang,
        "overlay_text": s.overlay_text,
        "video_summary": s.video_summary,
        "transcript_verdict": s.transcript_verdict.value,
        "summary_verdict": s.summary_verdict.value,
        "overlay_verdict": s.overlay_verdict.value,
        "buzzword_hits": [buzzword_hit_to_dict(h) for h in s.buzzword_hits],
        "deepfake_score": s.deepfake_score,
        "claim_results": [claim_result_to_dict(c) for c in s.claim_results],
        "is_advertisement": s.is_advertisement,
        "weapon_detected": s.weapon_detected,
    }


def signals_from_dict(d: dict) -> ModalitySignals:
    return ModalitySignals(
        transcript=d.get("transcript"),
        transcript_lang=d.get("transcript_lang"),
        overlay_text=d.get("overlay_text"),
        video_summary=d.get("video_summary"),
        transcript_verdict=SemanticClass(d.get("transcript_verdict", "unknown")),
        summary_verdict=SemanticClass(d.get("summary_verdict", "unknown")),
        overlay_verdict=SemanticClass(d.get("overlay_verdict", "unknown")),
        buzzword_hits=tuple(buzzword_hit_from_dict(h) for h in d.get("buzzword_hits") or ()),
        deepfake_score=None if d.get("deepfake_score") is None else float(d["deepfake_score"]),
        claim_results=tuple(claim_result_from_dict(c) for c in d.get("claim_results") or ()),
        is_advertisement=bool(d.get("is_advertisement", False)),
        weapon_detected=bool(d.get("weapon_detected", False)),
    )


def contribution_to_dict(c: Contribution) -> dict:
    return {"signal": c.signal, "weight": c.weight, "rationale": c.rationale}


def contribution_from_dict(d: dict) -> Contribution:
    return Contribution(signal=d["signal"], weight=float(d["weight"]), rationale=d["rationale"])


def result_to_dict(r: CheckworthinessResult) -> dict:
    return {
        "label": r.label.value,
        "score": r.score,
        "threshold": r.threshold,
        "contributions": [contribution_to_dict(c) for c in r.contributions],
        "ad_override": r.ad_override,
    }


def result_from_dict(d: dict) -> CheckworthinessResult:
    return CheckworthinessResult(
        label=Label(d["label"]),
        score=float(d["score"]),
        threshold=float(d["threshold"]),
        contributions=tuple(contribution_from_dict(c) for c in d.get("contributions") or ()),
        ad_override=bool(d.get("ad_override", False)),
    )


def frame_to_dict(f: FrameSample) -> dict:
    return {
        "index": f.index,
        "timestamp_s": f.timestamp_s,
        "image_b64": base64.b64encode(f.image_bytes).decode("ascii"),
        "width": f.width,
        "height": f.height,
    }


def frame_from_dict(d: dict) -> FrameSample:
    return FrameSample(
        index=int(d["index"]),
        timestamp_s=float(d["timestamp_s"]),
        image_bytes=base64.b64decode(d["image_b64"]),
        width=int(d["width"]),
        height=int(d["height"]),
    )


def bundle_to_dict(b: MediaBundle) -> dict:
    return {
        "video": video_item_to_dict(b.video),
        "frames": [frame_to_dict(f) for f in b.frames],
        "audio_path": b.audio_path,
    }


def bundle_from_dict(d: dict) -> MediaBundle:
    return MediaBundle(
        video=video_item_from_dict(d["video"]),
        frames=tuple(frame_from_dict(f) for f in d.get("frames") or ()),
        audio_path=d.get("audio_path"),
    )


def lexicon_to_dict(lx: Lexicon) -> dict:
    return {
        "language": lx.language,
        "entries": [
            {"term": e.term, "match_mode": e.match_mode, "note": e.note} for e in lx.entries
        ],
    }


def lexicon_from_dict(d: dict) -> Lexicon:
    return Lexicon(
        language=d["language"],
        entries=tuple(
            LexiconEntry(term=e["term"], match_mode=e.get("match_mode", "word"), note=e.get("note", ""))
            for e in d.get("entries") or ()
        ),
    )


def dataset_record_to_dict(r: DatasetRecord) -> dict:
    return {
        "video_id": r.video_id,
        "gold_label": r.gold_label.value,
        "language": r.language,
        "signals": None if r.signals is None else signals_to_dict(r.signals),
        "media_path": r.media_path,
    }


def dataset_record_from_dict(d: dict) -> DatasetRecord:
    return DatasetRecord(
        video_id=d["video_id"],
        gold_label=Label(d["gold_label"]),
        language=d.get("language") or "",
        signals=None if d.get("signals") is None else signals_from_dict(d["signals"]),
        media_path=d.get("media_path"),
    )


_TO_DICT = {
    VideoItem: video_item_to_dict,
    BuzzwordHit: buzzword_hit_to_dict,
    ClaimCheckResult: claim_result_to_dict,
    ModalitySignals: signals_to_dict,
    Contribution: contribution_to_dict,
    CheckworthinessResult: result_to_dict,
    FrameSample: frame_to_dict,
    MediaBundle: bundle_to_dict,
    Lexicon: lexicon_to_dict,
    DatasetRecord: dataset_record_to_dict,
}

_FROM_DICT = {
    VideoItem: video_item_from_dict,
    BuzzwordHit: buzzword_hit_from_dict,
    ClaimCheckResult: claim_result_from_dict,
    ModalitySignals: signals_from_dict,
    Contribution: contribution_from_dict,
    CheckworthinessResult: result_from_dict,
    FrameSample: frame_from_dict,
    MediaBundle: bundle_from_dict,
    Lexicon: lexicon_from_dict,
    DatasetRecord: dataset_record_from_dict,
}


def canonical_serialize(value: Any) -> bytes:
    """Serialize any registered domain value to its canonical byte form."""
    conv = _TO_DICT.get(type(value))
    if conv is None:
        raise TypeError(f"no canonical serialization registered for {type(value).__name__}")
    return canonical_json_bytes(conv(value))


def canonical_parse(cls: type, data: bytes | str) -> Any:
    """Parse the canonical byte form back into a domain value."""
    conv = _FROM_DICT.get(cls)
    if conv is None:
        raise TypeError(f"no canonical parse registered for {cls.__name__}")
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    return conv(json.loads(data))
