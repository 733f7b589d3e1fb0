"""Shared domain types for the triage pipeline.

Everything here is an immutable value object: safe to share between
threads, hashable where it matters, and serializable through
``vidtriage.serialize``. No scoring or persistence logic lives here.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

MAX_DURATION_S = 600.0  # short-video rule: ten minutes


class SemanticClass(str, Enum):
    """Per-modality verdict assigned by the LLM classifier.

    ``unknown`` is reserved for unparseable classifier output; it is never
    a deliberate model answer.
    """

    political = "political"
    hostile = "hostile"
    benign = "benign"
    promotional = "promotional"
    contentious_issue = "contentious_issue"
    unknown = "unknown"


class Stance(str, Enum):
    """Relation of retrieved evidence to a claim."""

    supported = "supported"
    refuted = "refuted"
    disputed = "disputed"
    no_evidence = "no_evidence"


class Label(str, Enum):
    checkworthy = "Checkworthy"
    not_checkworthy = "Not_Checkworthy"


class HitSource(str, Enum):
    transcript = "transcript"
    overlay = "overlay"


@dataclass(frozen=True)
class VideoItem:
    """A video under analysis plus provenance.

    ``id`` is the hex sha256 of the media bytes, so identical bytes get
    identical ids no matter where they came from.
    """

    id: str
    source: str
    duration_s: float
    language_hint: str | None = None
    title: str | None = None
    description: str | None = None

    def __post_init__(self) -> None:
        if self.duration_s < 0:
            raise ValueError("duration_s must be non-negative")


@dataclass(frozen=True)
class BuzzwordHit:
    """One lexicon term matched in transcript or overlay text.

    ``span`` is a (start, end) character range into the original source
    text; ``surface`` is the text as it appeared there.
    """

    term: str
    surface: str
    source: HitSource
    span: tuple[int, int]

    def __post_init__(self) -> None:
        start, end = self.span
        if start < 0 or end <= start:
            raise ValueError(f"bad span {self.span!r}")


@dataclass(frozen=True)
class ClaimCheckResult:
    """Stance signal for one detected claim.

    ``warning`` is set when the verification backend failed for this claim
    and the result was degraded to ``no_evidence`` instead of failing the
    whole batch.
    """

    claim_text: str
    stance: Stance
    evidence_refs: tuple[str, ...] = ()
    confidence: float = 0.0
    warning: str | None = None

    def __post_init__(self) -> None:
        if not self.claim_text:
            raise ValueError("claim_text must be non-empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")


@dataclass(frozen=True)
class ModalitySignals:
    """Joined per-modality extraction outputs for one video.

    Verdict fields always carry a value (``unknown`` when the source text
    was absent or the classifier failed), so downstream scoring never has
    to branch on missing verdicts.
    """

    transcript: str | None = None
    transcript_lang: str | None = None
    overlay_text: str | None = None
    video_summary: str | None = None
    transcript_verdict: SemanticClass = SemanticClass.unknown
    summary_verdict: SemanticClass = SemanticClass.unknown
    overlay_verdict: SemanticClass = SemanticClass.unknown
    buzzword_hits: tuple[BuzzwordHit, ...] = ()
    deepfake_score: float | None = None
    claim_results: tuple[ClaimCheckResult, ...] = ()
    is_advertisement: bool = False
    weapon_detected: bool = False

    def __post_init__(self) -> None:
        if self.deepfake_score is not None and not 0.0 <= self.deepfake_score <= 1.0:
            raise ValueError("deepfake_score must lie in [0, 1]")


@dataclass(frozen=True)
class Contribution:
    """One line of the scoring ledger: which signal fired, at what weight, and why."""

    signal: str
    weight: float
    rationale: str


@dataclass(frozen=True)
class CheckworthinessResult:
    """Final label with a complete, auditable explanation ledger."""

    label: Label
    score: float
    threshold: float
    contributions: tuple[Contribution, ...]
    ad_override: bool = False


def result_violations(result: CheckworthinessResult) -> list[str]:
    """Check the internal-consistency invariants of a result instance.

    Checkable on any instance without pipeline context. Returns one message
    per violated invariant; empty means consistent.
    """
    out: list[str] = []
    ledger_sum = sum(c.weight for c in result.contributions)
    if ledger_sum != result.score:
        out.append(f"contribution weights sum to {ledger_sum}, score is {result.score}")
    if result.ad_override and result.label is not Label.not_checkworthy:
        out.append("ad_override set but label is not Not_Checkworthy")
    if not result.ad_override:
        expected = Label.checkworthy if result.score >= result.threshold else Label.not_checkworthy
        if result.label is not expected:
            out.append(f"label {result.label.value} inconsistent with score {result.score} vs threshold {result.threshold}")
    return out


@dataclass(frozen=True)
class FrameSample:
    """One sampled frame: encoded raster image plus its place on the timeline."""

    index: int
    timestamp_s: float
    image_bytes: bytes
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.index < 0 or self.timestamp_s < 0:
            raise ValueError("index and timestamp_s must be non-negative")


@dataclass(frozen=True)
class MediaBundle:
    """Everything the extraction backends need for one admitted video."""

    video: VideoItem
    frames: tuple[FrameSample, ...]
    audio_path: str | None = None


@dataclass(frozen=True)
class LexiconEntry:
    term: str
    match_mode: str = "word"  # word | phrase | regex-lite
    note: str = ""


@dataclass(frozen=True)
class Lexicon:
    """Buzzword lexicon for one language ("*" applies to all)."""

    language: str
    entries: tuple[LexiconEntry, ...]


@dataclass(frozen=True)
class DatasetRecord:
    """One labeled evaluation record.

    Fixture-mode records carry recorded ``signals``; live-mode records
    carry a ``media_path`` to analyze. At least one must be present.
    """

    video_id: str
    gold_label: Label
    language: str = ""
    signals: ModalitySignals | None = None
    media_path: str | None = None

    def __post_init__(self) -> None:
        if self.signals is None and self.media_path is None:
            raise ValueError(f"record {self.video_id}: need recorded signals or a media path")
