"""Typed operations on top of the backend envelope.

One method per analysis operation. Free-text model output is mapped to the
closed verdict and stance vocabularies here, totally: any string parses to
something, with ``unknown`` / ``no_evidence`` as the conservative floors.

The transport is pluggable: live runs POST through the HTTP envelope,
fixture runs replay recorded responses in-process with no sockets at all.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from pathlib import Path

from ..config import PipelineConfig
from ..model import ClaimCheckResult, FrameSample, SemanticClass, Stance
from .envelope import BackendClient, BackendProtocolError, BackendUnavailable, request_digest


@dataclass(frozen=True)
class PromptTemplate:
    """Instruction text sent verbatim alongside the subject text/frames.

    Kept as data so deployments can tune wording without code changes; the
    prompt participates in the request digest, so fixture recordings pin it.
    """

    name: str
    text: str


DEFAULT_PROMPTS = {
    "classify": PromptTemplate(
        "classify",
        "Classify the following content as exactly one of: political, hostile, "
        "benign, promotional, contentious-issue. Answer with the single class name.",
    ),
    "summarize": PromptTemplate(
        "summarize",
        "Describe what this video shows in two sentences, focusing on events, "
        "places, and any violence or destruction visible.",
    ),
}

# Accepted surface variants, checked as substrings of the lowered text.
# Earliest occurrence wins, longest wins a tie, so negated forms like
# "not true" must be listed alongside the form they contain.
_CLASS_VARIANTS: list[tuple[str, SemanticClass]] = [
    ("contentious-issue", SemanticClass.contentious_issue),
    ("contentious_issue", SemanticClass.contentious_issue),
    ("contentious issue", SemanticClass.contentious_issue),
    ("political", SemanticClass.political),
    ("hostile", SemanticClass.hostile),
    ("benign", SemanticClass.benign),
    ("promotional", SemanticClass.promotional),
    ("unknown", SemanticClass.unknown),
]

_STANCE_VARIANTS: list[tuple[str, Stance]] = [
    ("no_evidence", Stance.no_evidence),
    ("no-evidence", Stance.no_evidence),
    ("no evidence", Stance.no_evidence),
    ("not enough evidence", Stance.no_evidence),
    ("unverified", Stance.no_evidence),
    ("unproven", Stance.no_evidence),
    ("not supported", Stance.no_evidence),
    ("unsupported", Stance.no_evidence),
    ("disputed", Stance.disputed),
    ("contested", Stance.disputed),
    ("mixed", Stance.disputed),
    ("misleading", Stance.disputed),
    ("partly false", Stance.disputed),
    ("partially false", Stance.disputed),
    ("half true", Stance.disputed),
    ("half-true", Stance.disputed),
    ("refuted", Stance.refuted),
    ("debunked", Stance.refuted),
    ("untrue", Stance.refuted),
    ("not true", Stance.refuted),
    ("false", Stance.refuted),
    ("incorrect", Stance.refuted),
    ("fabricated", Stance.refuted),
    ("supported", Stance.supported),
    ("confirmed", Stance.supported),
    ("accurate", Stance.supported),
    ("true", Stance.supported),
    ("correct", Stance.supported),
    ("verified", Stance.supported),
]


def _earliest(text: str, variants):
    lowered = text.strip().lower()
    best = None
    for surface, value in variants:
        idx = lowered.find(surface)
        if idx < 0:
            continue
        key = (idx, -len(surface))
        if best is None or key < best[0]:
            best = (key, value)
    return None if best is None else best[1]


def parse_semantic_class(text: str) -> SemanticClass:
    """Map free-form classifier output to a verdict. Never raises."""
    found = _earliest(text, _CLASS_VARIANTS)
    return found if found is not None else SemanticClass.unknown


def parse_stance(text: str) -> Stance:
    """Map free-form verification output to a stance. Never raises."""
    found = _earliest(text, _STANCE_VARIANTS)
    return found if found is not None else Stance.no_evidence


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


class HttpTransport:
    """Live transport: one envelope client per backend."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self._clients: dict[str, BackendClient] = {}

    def call(self, backend: str, op: str, payload: dict) -> dict:
        if backend not in self._clients:
            self._clients[backend] = BackendClient(backend, self.config)
        return self._clients[backend].call(op, payload)

    def close(self) -> None:
        for client in self._clients.values():
            client.close()
        self._clients.clear()


class ReplayTransport:
    """Offline transport: answers from recorded responses, keyed by the
    same canonical request digest the live envelope would send."""

    def __init__(self, recorded: dict[str, dict]):
        self.recorded = recorded
        self.calls: list[tuple[str, str]] = []

    @classmethod
    def load(cls, path: str | Path) -> "ReplayTransport":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def call(self, backend: str, op: str, payload: dict) -> dict:
        d = request_digest(op, payload)
        self.calls.append((op, d))
        entry = self.recorded.get(d)
        if entry is None:
            raise BackendUnavailable(backend, f"no recorded response for digest {d} (op {op})")
        status = int(entry.get("status", 200))
        if status >= 400:
            raise BackendUnavailable(backend, f"recorded failure status {status}")
        return entry["body"]

    def close(self) -> None:
        pass


class AnalysisBackends:
    """All backend operations for one pipeline run, over one transport."""

    def __init__(
        self,
        config: PipelineConfig,
        transport=None,
        prompts: dict[str, PromptTemplate] | None = None,
    ):
        self.config = config
        self.transport = transport if transport is not None else HttpTransport(config)
        self.prompts = dict(DEFAULT_PROMPTS)
        if prompts:
            self.prompts.update(prompts)

    def close(self) -> None:
        self.transport.close()

    def transcribe(self, audio_bytes: bytes, language_hint: str | None) -> tuple[str, str | None]:
        body = self.transport.call(
            "transcription",
            "transcribe",
            {"audio_b64": _b64(audio_bytes), "language_hint": language_hint},
        )
        if "text" not in body:
            raise BackendProtocolError("transcription", "missing 'text' in response")
        lang = body.get("detected_lang")
        return str(body["text"]), None if lang is None else str(lang)

    def ocr_frame(self, image_bytes: bytes) -> str:
        body = self.transport.call("ocr", "ocr", {"image_b64": _b64(image_bytes)})
        if "text" not in body:
            raise BackendProtocolError("ocr", "missing 'text' in response")
        return str(body["text"])

    def summarize(self, frames: tuple[FrameSample, ...]) -> str:
        body = self.transport.call(
            "captioning",
            "summarize",
            {
                "frames_b64": [_b64(f.image_bytes) for f in frames],
                "prompt": self.prompts["summarize"].text,
            },
        )
        if "summary" not in body:
            raise BackendProtocolError("captioning", "missing 'summary' in response")
        return str(body["summary"])

    def classify(self, text: str) -> SemanticClass:
        body = self.transport.call(
            "classifier",
            "classify",
            {"prompt": self.prompts["classify"].text, "text": text},
        )
        if "verdict_text" not in body:
            raise BackendProtocolError("classifier", "missing 'verdict_text' in response")
        return parse_semantic_class(str(body["verdict_text"]))

    def deepfake_score(self, frames: tuple[FrameSample, ...]) -> float:
        body = self.transport.call(
            "deepfake", "deepfake", {"frames_b64": [_b64(f.image_bytes) for f in frames]}
        )
        if "score" not in body:
            raise BackendProtocolError("deepfake", "missing 'score' in response")
        score = float(body["score"])
        if not 0.0 <= score <= 1.0:
            raise BackendProtocolError("deepfake", f"score {score} outside [0, 1]")
        return score

    def detect_claims(self, text: str) -> list[str]:
        body = self.transport.call("claim_detection", "detect_claims", {"text": text})
        claims = body.get("claims")
        if not isinstance(claims, list):
            raise BackendProtocolError("claim_detection", "missing 'claims' list in response")
        return [str(c) for c in claims if str(c).strip()]

    def verify_claim(self, claim: str) -> ClaimCheckResult:
        body = self.transport.call("claim_verification", "verify_claim", {"claim": claim})
        if "verdict_text" not in body:
            raise BackendProtocolError("claim_verification", "missing 'verdict_text' in response")
        refs = body.get("evidence_refs") or []
        return ClaimCheckResult(
            claim_text=claim,
            stance=parse_stance(str(body["verdict_text"])),
            evidence_refs=tuple(str(r) for r in refs),
            confidence=float(body.get("confidence") or 0.0),
            warning=None,
        )
