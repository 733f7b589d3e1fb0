"""End-to-end analysis orchestration.

ingest -> concurrent modality extraction -> verdict classification ->
buzzword scan + claim verification -> decision engine -> persist.

Failure policy: only ingest errors abort a run. Every module failure
degrades to absent signals for that modality, is recorded in the module
status table, and the final label is computed from whatever survived.
"""

from __future__ import annotations

import json
import logging
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import buzzwords, claims, decision, ingest, serialize
from .backends.clients import AnalysisBackends
from .config import KNOWN_MODULES, PipelineConfig, config_digest
from .model import (
    CheckworthinessResult,
    HitSource,
    MediaBundle,
    ModalitySignals,
    SemanticClass,
)
from .store import Store

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModuleStatus:
    status: str  # ok | failed | disabled
    ms: float
    note: str | None = None


@dataclass(frozen=True)
class AnalysisRecord:
    """Everything one analysis produced; the unit of persistence."""

    video_id: str
    config_digest: str
    created_at: str
    signals: ModalitySignals
    result: CheckworthinessResult
    modules: dict[str, ModuleStatus]


def record_to_dict(record: AnalysisRecord) -> dict:
    return {
        "video_id": record.video_id,
        "config_digest": record.config_digest,
        "created_at": record.created_at,
        "signals": serialize.signals_to_dict(record.signals),
        "result": serialize.result_to_dict(record.result),
        "modules": {
            name: {"status": st.status, "ms": st.ms, "note": st.note}
            for name, st in record.modules.items()
        },
    }


def record_from_dict(data: dict) -> AnalysisRecord:
    return AnalysisRecord(
        video_id=data["video_id"],
        config_digest=data["config_digest"],
        created_at=data["created_at"],
        signals=serialize.signals_from_dict(data["signals"]),
        result=serialize.result_from_dict(data["result"]),
        modules={
            name: ModuleStatus(status=st["status"], ms=st["ms"], note=st.get("note"))
            for name, st in data["modules"].items()
        },
    )


def record_bytes(record: AnalysisRecord) -> bytes:
    return serialize.canonical_json_bytes(record_to_dict(record))


def render_analysis(record: AnalysisRecord) -> str:
    """Explanation report plus module failure notes, for humans."""
    lines = [decision.explain(record.result)]
    failures = [
        f"module failure: {name} ({st.note})" if st.note else f"module failure: {name}"
        for name, st in record.modules.items()
        if st.status == "failed"
    ]
    lines.extend(failures)
    return "\n".join(lines)


class _Tracker:
    """Collects per-module status and wall time."""

    def __init__(self):
        self.modules: dict[str, ModuleStatus] = {}

    def run(self, module: str, fn, fallback):
        """Run one module body; on any exception record failure and return
        the fallback value."""
        t0 = time.perf_counter()
        try:
            value = fn()
            self.modules[module] = ModuleStatus("ok", ms=_elapsed_ms(t0))
            return value
        except Exception as exc:
            log.warning("module %s failed: %s", module, exc)
            self.modules[module] = ModuleStatus("failed", ms=_elapsed_ms(t0), note=str(exc))
            return fallback

    def disabled(self, module: str) -> None:
        self.modules[module] = ModuleStatus("disabled", ms=0.0)

    def failed(self, module: str, note: str) -> None:
        self.modules[module] = ModuleStatus("failed", ms=0.0, note=note)

    def ok(self, module: str, t0: float, note: str | None = None) -> None:
        self.modules[module] = ModuleStatus("ok", ms=_elapsed_ms(t0), note=note)


def _elapsed_ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 3)


def _join_overlay(texts: list[str]) -> str | None:
    """Frame-ordered OCR concatenation: consecutive duplicates collapse,
    distinct segments join with ' | '."""
    segments: list[str] = []
    for text in texts:
        cleaned = text.strip()
        if cleaned and (not segments or segments[-1] != cleaned):
            segments.append(cleaned)
    return " | ".join(segments) if segments else None


def extract_signals(
    bundle: MediaBundle, config: PipelineConfig, backends: AnalysisBackends, tracker: _Tracker
) -> ModalitySignals:
    """All modality extraction for one admitted video."""

    def transcription() -> tuple[str | None, str | None]:
        if bundle.audio_path is None:
            raise RuntimeError("no audio stream")
        audio = Path(bundle.audio_path).read_bytes()
        return backends.transcribe(audio, bundle.video.language_hint)

    def ocr() -> str | None:
        return _join_overlay([backends.ocr_frame(f.image_bytes) for f in bundle.frames])

    def summary() -> str | None:
        text = backends.summarize(bundle.frames).strip()
        return text or None

    def deepfake() -> float | None:
        return backends.deepfake_score(bundle.frames)

    # Extraction fans out; everything below joins on the results.
    with ThreadPoolExecutor(max_workers=4) as pool:
        futures = {}
        if config.enabled("transcription"):
            futures["transcription"] = pool.submit(lambda: tracker.run("transcription", transcription, (None, None)))
        else:
            tracker.disabled("transcription")
        if config.enabled("ocr"):
            futures["ocr"] = pool.submit(lambda: tracker.run("ocr", ocr, None))
        else:
            tracker.disabled("ocr")
        if config.enabled("video_summary"):
            futures["video_summary"] = pool.submit(lambda: tracker.run("video_summary", summary, None))
        else:
            tracker.disabled("video_summary")
        if config.enabled("deepfake"):
            futures["deepfake"] = pool.submit(lambda: tracker.run("deepfake", deepfake, None))
        else:
            tracker.disabled("deepfake")

        transcript, transcript_lang = futures["transcription"].result() if "transcription" in futures else (None, None)
        overlay_text = futures["ocr"].result() if "ocr" in futures else None
        video_summary = futures["video_summary"].result() if "video_summary" in futures else None
        deepfake_score = futures["deepfake"].result() if "deepfake" in futures else None

    def classify(module: str, text: str | None) -> SemanticClass:
        """Verdict for one modality's text; a classifier failure marks the
        owning module failed but keeps its extracted text."""
        if not text or not text.strip() or tracker.modules[module].status != "ok":
            return SemanticClass.unknown
        try:
            return backends.classify(text)
        except Exception as exc:
            log.warning("classification for %s failed: %s", module, exc)
            prev = tracker.modules[module]
            tracker.modules[module] = ModuleStatus(
                "failed", ms=prev.ms, note=f"verdict classification failed: {exc}"
            )
            return SemanticClass.unknown

    transcript_verdict = classify("transcription", transcript)
    summary_verdict = classify("video_summary", video_summary)
    overlay_verdict = classify("ocr", overlay_text)

    if config.enabled("buzzword"):
        def scan() -> tuple:
            lexicons = buzzwords.load_lexicons(config.lexicon_paths)
            hits = buzzwords.detect(transcript or "", HitSource.transcript, lexicons)
            hits += buzzwords.detect(overlay_text or "", HitSource.overlay, lexicons)
            return tuple(hits)

        buzzword_hits = tracker.run("buzzword", scan, ())
    else:
        tracker.disabled("buzzword")
        buzzword_hits = ()

    if config.enabled("fact_check"):
        def check() -> tuple:
            found = claims.collect_claims(transcript, video_summary, backends)
            return tuple(claims.verify_claims(found, backends))

        claim_results = tracker.run("fact_check", check, ())
    else:
        tracker.disabled("fact_check")
        claim_results = ()

    verdicts = (transcript_verdict, summary_verdict, overlay_verdict)
    if config.enabled("ad_filter"):
        t0 = time.perf_counter()
        is_advertisement = SemanticClass.promotional in verdicts and not any(
            v in decision.FIRING_VERDICTS for v in verdicts
        )
        tracker.ok("ad_filter", t0)
    else:
        tracker.disabled("ad_filter")
        is_advertisement = False

    if config.enabled("weapon"):
        # Recognized in config for ablations over recorded signals, but no
        # live detector ships in this build.
        tracker.failed("weapon", "no weapon detection backend in this build")
    else:
        tracker.disabled("weapon")

    return ModalitySignals(
        transcript=transcript,
        transcript_lang=transcript_lang,
        overlay_text=overlay_text,
        video_summary=video_summary,
        transcript_verdict=transcript_verdict,
        summary_verdict=summary_verdict,
        overlay_verdict=overlay_verdict,
        buzzword_hits=buzzword_hits,
        deepfake_score=deepfake_score,
        claim_results=claim_results,
        is_advertisement=is_advertisement,
        weapon_detected=False,
    )


def analyze(
    source: str,
    config: PipelineConfig,
    backends: AnalysisBackends,
    store: Store | None = None,
    work_dir: str | Path | None = None,
    language_hint: str | None = None,
    created_at: str | None = None,
) -> AnalysisRecord:
    """Analyze one source end to end.

    A stored record for (video_id, config digest) short-circuits the run:
    it is returned as persisted, with zero backend calls. Only ingest
    errors (TooLong, Unreadable, Unsupported) propagate.
    """
    cfg_digest = config_digest(config)
    work = Path(work_dir) if work_dir is not None else Path(tempfile.mkdtemp(prefix="vidtriage-"))
    path = ingest.resolve_source(source, config, work)
    video_id = ingest.video_id_for_file(path)

    if store is not None:
        stored = store.load_analysis(video_id, cfg_digest)
        if stored is not None:
            return record_from_dict(json.loads(stored.decode("utf-8")))

    bundle = ingest.ingest(
        str(path), config, work, language_hint=language_hint
    )
    tracker = _Tracker()
    signals = extract_signals(bundle, config, backends, tracker)
    result = decision.score(signals, config)
    record = AnalysisRecord(
        video_id=video_id,
        config_digest=cfg_digest,
        created_at=created_at
        or datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        signals=signals,
        result=result,
        modules=tracker.modules,
    )
    if store is not None:
        store.save_analysis(video_id, cfg_digest, record_bytes(record))
    return record
