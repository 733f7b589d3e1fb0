"""Deterministic offline fixtures: demo video, recorded backend responses,
and synthetic evaluation datasets.

Everything is generated locally (`vidtriage fixtures build`), nothing is
downloaded. Backend recordings are produced by running the real pipeline
against a recording transport, so the stored request digests are exactly
the ones replay mode will compute. Dataset fixtures mirror the shape of a
small public study corpus (two languages, skewed class ratios) without
redistributing any of its content.
"""

from __future__ import annotations

import base64
import json
import shutil
import tempfile
from pathlib import Path

import cv2
import numpy as np

from . import ingest, pipeline
from .avi import write_avi
from .backends.clients import AnalysisBackends
from .backends.envelope import request_digest
from .config import PipelineConfig
from .model import (
    BuzzwordHit,
    DatasetRecord,
    HitSource,
    Label,
    ModalitySignals,
    SemanticClass,
)
from .evaluation import save_dataset

BEIRUT_TRANSCRIPT = "It's a shame (in Arabic)"
BEIRUT_TRANSCRIPT_LANG = "ar"
BEIRUT_OVERLAY_FIRST = "Someone captured the"
BEIRUT_OVERLAY_SECOND = "missile in the Beirut blast"
BEIRUT_OVERLAY = f"{BEIRUT_OVERLAY_FIRST} | {BEIRUT_OVERLAY_SECOND}"
BEIRUT_SUMMARY = (
    "The video captures footage of the 2020 Beirut blast, showing destruction "
    "and chaos in an urban area, with explosions visible throughout."
)
BEIRUT_DEEPFAKE_SCORE = 0.12

_W, _H, _FPS, _N_FRAMES = 160, 120, 1, 16
_AUDIO_RATE = 16_000


class RecordingTransport:
    """Answers from a scripted responder while recording digest -> response."""

    def __init__(self, responder):
        self.responder = responder
        self.recorded: dict[str, dict] = {}

    def call(self, backend: str, op: str, payload: dict) -> dict:
        body = self.responder(op, payload)
        self.recorded[request_digest(op, payload)] = {"op": op, "status": 200, "body": body}
        return body

    def close(self) -> None:
        pass


def build_demo_video(path: str | Path) -> Path:
    """A 16-second MJPEG+PCM AVI with byte-deterministic content."""
    frames = []
    for k in range(_N_FRAMES):
        img = np.zeros((_H, _W, 3), dtype=np.uint8)
        img[:, :, 0] = 40 + 12 * k  # blue channel ramps per frame
        img[:, :, 2] = 200 - 10 * k
        x = 8 + 8 * k
        cv2.rectangle(img, (x, 40), (x + 24, 80), (255, 255, 255), -1)
        cv2.putText(img, str(k), (10, 24), cv2.FONT_HERSHEY_SIMPLEX, 0.8, (255, 255, 255), 2)
        ok, buf = cv2.imencode(".jpg", img)
        if not ok:
            raise RuntimeError("JPEG encode failed while building the demo video")
        frames.append(buf.tobytes())
    t = np.arange(_N_FRAMES / _FPS * _AUDIO_RATE, dtype=np.float64) / _AUDIO_RATE
    tone = (np.sin(2 * np.pi * 440.0 * t) * 12000).astype("<i2")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_avi(path, frames, fps=_FPS, width=_W, height=_H, pcm_samples=tone.tobytes(), sample_rate=_AUDIO_RATE)
    return path


def record_demo_responses(video_path: Path, config: PipelineConfig) -> dict[str, dict]:
    """Run the pipeline over the demo video against scripted answers and
    return the recorded response map."""
    work = Path(tempfile.mkdtemp(prefix="vidtriage-fixture-"))
    try:
        bundle = ingest.ingest(str(video_path), config, work)
        frame_order = {
            base64.b64encode(f.image_bytes).decode("ascii"): f.index for f in bundle.frames
        }
        half = len(bundle.frames) // 2

        def responder(op: str, payload: dict) -> dict:
            if op == "transcribe":
                return {"text": BEIRUT_TRANSCRIPT, "detected_lang": BEIRUT_TRANSCRIPT_LANG}
            if op == "ocr":
                idx = frame_order[payload["image_b64"]]
                text = BEIRUT_OVERLAY_FIRST if idx < half else BEIRUT_OVERLAY_SECOND
                return {"text": text}
            if op == "summarize":
                return {"summary": BEIRUT_SUMMARY}
            if op == "classify":
                text = payload["text"]
                if text == BEIRUT_SUMMARY:
                    return {"verdict_text": "contentious-issue"}
                return {"verdict_text": "hostile"}
            if op == "deepfake":
                return {"score": BEIRUT_DEEPFAKE_SCORE}
            if op == "detect_claims":
                return {"claims": []}
            raise AssertionError(f"unexpected op {op} while recording")

        transport = RecordingTransport(responder)
        backends = AnalysisBackends(config, transport=transport)
        record = pipeline.analyze(str(video_path), config, backends, store=None, work_dir=work / "run")
        got = record.signals
        expected = (BEIRUT_TRANSCRIPT, BEIRUT_OVERLAY, BEIRUT_SUMMARY)
        actual = (got.transcript, got.overlay_text, got.video_summary)
        if actual != expected:
            raise RuntimeError(f"fixture recording self-check failed: {actual!r}")
        return transport.recorded
    finally:
        shutil.rmtree(work, ignore_errors=True)


# -- synthetic datasets ---------------------------------------------------


def _signals(
    *,
    n_firing_verdicts: int = 0,
    buzzword: bool = False,
    transcript: str | None = None,
) -> ModalitySignals:
    verdicts = [SemanticClass.benign] * 3
    firing = [SemanticClass.hostile, SemanticClass.contentious_issue, SemanticClass.political]
    for i in range(min(n_firing_verdicts, 3)):
        verdicts[i] = firing[i]
    hits = ()
    if buzzword:
        transcript = transcript or "They call it a plandemic response"
        start = transcript.index("plandemic")
        hits = (
            BuzzwordHit(
                term="plandemic",
                surface="plandemic",
                source=HitSource.transcript,
                span=(start, start + len("plandemic")),
            ),
        )
    return ModalitySignals(
        transcript=transcript,
        transcript_verdict=verdicts[0],
        summary_verdict=verdicts[1],
        overlay_verdict=verdicts[2],
        buzzword_hits=hits,
    )


def build_synth20(path: str | Path) -> list[DatasetRecord]:
    """20 records with a known confusion under default weights:
    TP=10, FN=2, FP=2, TN=6."""
    records = []
    for i in range(10):  # true positives: two firing verdicts, score 2
        records.append(
            DatasetRecord(f"synth-tp-{i:02d}", Label.checkworthy, "en", _signals(n_firing_verdicts=2))
        )
    for i in range(2):  # false negatives: buzzword only, score 1
        records.append(
            DatasetRecord(f"synth-fn-{i:02d}", Label.checkworthy, "en", _signals(buzzword=True))
        )
    for i in range(2):  # false positives: two firing verdicts on harmless gold
        records.append(
            DatasetRecord(f"synth-fp-{i:02d}", Label.not_checkworthy, "en", _signals(n_firing_verdicts=2))
        )
    for i in range(6):  # true negatives: nothing fires
        records.append(
            DatasetRecord(f"synth-tn-{i:02d}", Label.not_checkworthy, "en", _signals())
        )
    save_dataset(records, path)
    return records


def build_buzzword_separator(path: str | Path) -> list[DatasetRecord]:
    """Only the buzzword signal separates the classes: each record carries
    one firing verdict, positives add one lexicon hit. Removing the
    buzzword module drives Checkworthy recall from 1.0 to 0.0."""
    records = []
    for i in range(10):
        records.append(
            DatasetRecord(
                f"bsep-cw-{i:02d}",
                Label.checkworthy,
                "en",
                _signals(n_firing_verdicts=1, buzzword=True),
            )
        )
    for i in range(10):
        records.append(
            DatasetRecord(
                f"bsep-ncw-{i:02d}", Label.not_checkworthy, "en", _signals(n_firing_verdicts=1)
            )
        )
    save_dataset(records, path)
    return records


def _confusion_dataset(
    path: str | Path, prefix: str, language: str, tp: int, fn: int, fp: int, tn: int
) -> list[DatasetRecord]:
    records = []
    for i in range(tp):
        records.append(
            DatasetRecord(f"{prefix}-tp-{i:04d}", Label.checkworthy, language, _signals(n_firing_verdicts=2))
        )
    for i in range(fn):
        records.append(
            DatasetRecord(f"{prefix}-fn-{i:04d}", Label.checkworthy, language, _signals())
        )
    for i in range(fp):
        records.append(
            DatasetRecord(f"{prefix}-fp-{i:04d}", Label.not_checkworthy, language, _signals(n_firing_verdicts=2))
        )
    for i in range(tn):
        records.append(
            DatasetRecord(f"{prefix}-tn-{i:04d}", Label.not_checkworthy, language, _signals())
        )
    save_dataset(records, path)
    return records


def build_language_datasets(out_dir: Path) -> dict[str, Path]:
    """Two class-skewed corpora (237 records at 33:204 and 254 at 114:140)
    with plausible error patterns, for report formatting and CLI runs."""
    no_path = out_dir / "dataset_no.jsonl"
    en_path = out_dir / "dataset_en.jsonl"
    # 33 Checkworthy / 204 Not_Checkworthy
    _confusion_dataset(no_path, "no", "no", tp=28, fn=5, fp=16, tn=188)
    # 114 Checkworthy / 140 Not_Checkworthy
    _confusion_dataset(en_path, "en", "en", tp=66, fn=48, fp=14, tn=126)
    return {"no": no_path, "en": en_path}


def build_deepfake_frames(path: str | Path, recordings: dict[str, dict]) -> None:
    """Labeled frame sets whose single 'frame' is a marker byte string; the
    recorded deepfake responses score fakes 0.9 and reals 0.1."""
    lines = []
    for i in range(6):
        for label, score in (("fake", 0.9), ("real", 0.1)):
            marker = f"df-{label}-{i:02d}".encode("ascii")
            frames_b64 = [base64.b64encode(marker).decode("ascii")]
            lines.append(json.dumps({"id": f"df-{label}-{i:02d}", "label": label, "frames_b64": frames_b64}))
            payload = {"frames_b64": frames_b64}
            recordings[request_digest("deepfake", payload)] = {
                "op": "deepfake",
                "status": 200,
                "body": {"score": score},
            }
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_all(out_dir: str | Path, config: PipelineConfig | None = None) -> dict[str, Path]:
    """Build every fixture into out_dir; returns name -> path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = config or PipelineConfig()
    video = build_demo_video(out / "beirut.avi")
    recordings = record_demo_responses(video, config)
    build_deepfake_frames(out / "deepfake_frames.jsonl", recordings)
    (out / "backends.json").write_text(
        json.dumps(recordings, ensure_ascii=False, sort_keys=True, indent=1), encoding="utf-8"
    )
    build_synth20(out / "synth20.jsonl")
    build_buzzword_separator(out / "buzzsep.jsonl")
    build_language_datasets(out)
    return {
        "video": video,
        "backends": out / "backends.json",
        "synth20": out / "synth20.jsonl",
        "buzzsep": out / "buzzsep.jsonl",
        "dataset_no": out / "dataset_no.jsonl",
        "dataset_en": out / "dataset_en.jsonl",
        "deepfake_frames": out / "deepfake_frames.jsonl",
    }
