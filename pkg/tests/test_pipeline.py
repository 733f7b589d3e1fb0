"""End-to-end analysis against the recorded demo video.

These tests run the full pipeline (decode, sample, extract, decide,
persist) with backend responses replayed in process, so they exercise
every seam without a network.
"""

import hashlib
import json
from dataclasses import replace

import pytest

from vidtriage import decision, fixtures, pipeline
from vidtriage.backends.clients import AnalysisBackends
from vidtriage.backends.envelope import BackendUnavailable
from vidtriage.config import config_digest
from vidtriage.model import Label, SemanticClass
from vidtriage.store import Store


class CountingTransport:
    """Delegates to a replay transport while counting every call."""

    def __init__(self, inner, fail_ops=()):
        self.inner = inner
        self.fail_ops = set(fail_ops)
        self.calls = []

    def call(self, backend, op, payload):
        self.calls.append((backend, op))
        if op in self.fail_ops:
            raise BackendUnavailable(backend, "simulated outage")
        return self.inner.call(backend, op, payload)

    def close(self):
        self.inner.close()


@pytest.fixture
def counting(replay):
    return CountingTransport(replay)


def _analyze(demo_video, transport, config, store=None, tmp=None):
    backends = AnalysisBackends(config, transport)
    return pipeline.analyze(
        str(demo_video), config, backends, store=store, work_dir=tmp
    )


def test_demo_video_fields(demo_video, counting, config, tmp_path):
    record = _analyze(demo_video, counting, config, tmp=tmp_path / "work")
    sig = record.signals
    assert sig.transcript == fixtures.BEIRUT_TRANSCRIPT
    assert sig.transcript_lang == fixtures.BEIRUT_TRANSCRIPT_LANG
    assert sig.overlay_text == fixtures.BEIRUT_OVERLAY
    assert sig.video_summary == fixtures.BEIRUT_SUMMARY
    assert sig.deepfake_score == fixtures.BEIRUT_DEEPFAKE_SCORE
    assert sig.transcript_verdict == SemanticClass.hostile
    assert sig.summary_verdict == SemanticClass.contentious_issue
    assert sig.overlay_verdict == SemanticClass.hostile
    assert not sig.is_advertisement

    assert record.result.label == Label.checkworthy
    assert record.result.score == 3.0
    assert record.result.threshold == 2.0
    fired = {c.signal for c in record.result.contributions if c.weight > 0}
    assert fired == {"verdict.transcript", "verdict.summary", "verdict.overlay"}


def test_overlay_joins_distinct_segments_once(demo_video, replay, config, tmp_path):
    # the demo clip shows each caption on several consecutive frames;
    # the joined overlay must not repeat them
    record = _analyze(demo_video, replay, config, tmp=tmp_path / "work")
    assert record.signals.overlay_text.count("|") == 1


def test_module_statuses_and_timings(demo_video, replay, config, tmp_path):
    record = _analyze(demo_video, replay, config, tmp=tmp_path / "work")
    statuses = {name: st.status for name, st in record.modules.items()}
    assert statuses == {
        "transcription": "ok",
        "ocr": "ok",
        "video_summary": "ok",
        "buzzword": "ok",
        "fact_check": "ok",
        "deepfake": "ok",
        "ad_filter": "ok",
        "weapon": "disabled",
    }
    assert all(st.ms >= 0.0 for st in record.modules.values())


def test_record_round_trip(demo_video, replay, config, tmp_path):
    record = _analyze(demo_video, replay, config, tmp=tmp_path / "work")
    data = pipeline.record_to_dict(record)
    assert pipeline.record_from_dict(data) == record
    # canonical bytes parse back to the same dict
    assert json.loads(pipeline.record_bytes(record).decode("utf-8")) == data


def test_video_id_is_content_hash(demo_video, replay, config, tmp_path):
    record = _analyze(demo_video, replay, config, tmp=tmp_path / "work")
    digest = hashlib.sha256(demo_video.read_bytes()).hexdigest()
    assert record.video_id == digest[:16]


def test_cached_rerun_is_byte_identical_with_zero_calls(demo_video, replay, config, tmp_path):
    store = Store(tmp_path / "store")
    first = CountingTransport(replay)
    rec1 = _analyze(demo_video, first, config, store=store, tmp=tmp_path / "w1")
    assert first.calls  # the cold run did talk to backends
    stored = store.load_analysis(rec1.video_id, rec1.config_digest)

    second = CountingTransport(replay)
    rec2 = _analyze(demo_video, second, config, store=store, tmp=tmp_path / "w2")
    assert second.calls == []
    assert rec2 == rec1
    assert store.load_analysis(rec2.video_id, rec2.config_digest) == stored


def test_config_change_misses_cache(demo_video, replay, config, tmp_path):
    store = Store(tmp_path / "store")
    _analyze(demo_video, replay, config, store=store, tmp=tmp_path / "w1")
    bumped = replace(config, threshold=5.0)
    counting = CountingTransport(replay)
    rec = _analyze(demo_video, counting, bumped, store=store, tmp=tmp_path / "w2")
    assert counting.calls  # re-analyzed, not served from the store
    assert rec.config_digest == config_digest(bumped)
    assert rec.result.label == Label.not_checkworthy  # 3.0 < 5.0


def test_transcription_outage_degrades(demo_video, replay, config, tmp_path):
    broken = CountingTransport(replay, fail_ops={"transcribe"})
    record = _analyze(demo_video, broken, config, tmp=tmp_path / "work")
    assert record.modules["transcription"].status == "failed"
    assert "simulated outage" in record.modules["transcription"].note
    sig = record.signals
    assert sig.transcript is None
    assert sig.transcript_verdict == SemanticClass.unknown
    # remaining modalities still carry the decision over the threshold
    assert sig.overlay_verdict == SemanticClass.hostile
    assert record.result.label == Label.checkworthy
    assert record.result.score == 2.0


def test_classifier_outage_marks_owner_failed_keeps_text(demo_video, replay, config, tmp_path):
    broken = CountingTransport(replay, fail_ops={"classify"})
    record = _analyze(demo_video, broken, config, tmp=tmp_path / "work")
    assert record.signals.transcript == fixtures.BEIRUT_TRANSCRIPT
    assert record.signals.transcript_verdict == SemanticClass.unknown
    assert record.modules["transcription"].status == "failed"
    assert "verdict classification" in record.modules["transcription"].note
    assert record.result.label == Label.not_checkworthy


def test_disabled_modules_skip_backends(demo_video, replay, config, tmp_path):
    quiet = config.with_disabled("transcription", "ocr", "video_summary", "deepfake", "fact_check")
    counting = CountingTransport(replay)
    record = _analyze(demo_video, counting, quiet, tmp=tmp_path / "work")
    assert counting.calls == []
    assert record.modules["transcription"].status == "disabled"
    assert record.result.label == Label.not_checkworthy
    disabled_entries = {
        c.signal for c in record.result.contributions if c.rationale == "module disabled"
    }
    assert "transcription" in disabled_entries


def test_render_analysis_includes_failures(demo_video, replay, config, tmp_path):
    broken = CountingTransport(replay, fail_ops={"deepfake"})
    record = _analyze(demo_video, broken, config, tmp=tmp_path / "work")
    text = pipeline.render_analysis(record)
    assert text.startswith("label: ")
    assert "module failure: deepfake" in text
    assert "simulated outage" in text


def test_render_analysis_clean_run_is_explanation_only(demo_video, replay, config, tmp_path):
    record = _analyze(demo_video, replay, config, tmp=tmp_path / "work")
    assert pipeline.render_analysis(record) == decision.explain(record.result)


def test_join_overlay_rules():
    assert pipeline._join_overlay([]) is None
    assert pipeline._join_overlay(["", "  "]) is None
    assert pipeline._join_overlay(["a", "a", "b"]) == "a | b"
    assert pipeline._join_overlay(["a", "b", "a"]) == "a | b | a"
    assert pipeline._join_overlay([" pad ", "pad"]) == "pad"
