"""Metric identities, dataset runs, ablations, and the deepfake bench."""

import base64
import random
from dataclasses import replace

import pytest

from vidtriage import evaluation
from vidtriage.backends.envelope import BackendUnavailable
from vidtriage.config import PipelineConfig
from vidtriage.model import DatasetRecord, Label, ModalitySignals, SemanticClass

CW = Label.checkworthy
NCW = Label.not_checkworthy


def _labels(tp, fn, fp, tn):
    """Parallel gold/pred lists realizing a 2x2 confusion, CW positive."""
    golds = [CW] * (tp + fn) + [NCW] * (fp + tn)
    preds = [CW] * tp + [NCW] * fn + [CW] * fp + [NCW] * tn
    return golds, preds


def test_balanced_square_case():
    report = evaluation.compute_metrics(*_labels(1, 1, 1, 1))
    for cls in ("Checkworthy", "Not_Checkworthy"):
        assert report.per_class[cls]["precision"] == 0.5
        assert report.per_class[cls]["recall"] == 0.5
        assert report.per_class[cls]["f1"] == 0.5
    assert report.accuracy == 0.5
    assert report.macro["f1"] == 0.5
    assert report.weighted_f1 == 0.5


def test_perfect_predictions():
    report = evaluation.compute_metrics(*_labels(3, 0, 0, 2))
    assert report.accuracy == 1.0
    assert report.per_class["Checkworthy"]["f1"] == 1.0
    assert report.confusion["Checkworthy"]["Not_Checkworthy"] == 0


def test_zero_division_convention():
    # no positive predictions at all: P(CW) is 0/0 -> 0, same for F1
    report = evaluation.compute_metrics(*_labels(0, 3, 0, 2))
    cw = report.per_class["Checkworthy"]
    assert cw["precision"] == 0.0
    assert cw["recall"] == 0.0
    assert cw["f1"] == 0.0


def test_confusion_cells_place_errors():
    report = evaluation.compute_metrics(*_labels(2, 1, 3, 4))
    assert report.confusion["Checkworthy"]["Checkworthy"] == 2
    assert report.confusion["Checkworthy"]["Not_Checkworthy"] == 1
    assert report.confusion["Not_Checkworthy"]["Checkworthy"] == 3
    assert report.confusion["Not_Checkworthy"]["Not_Checkworthy"] == 4


def test_support_is_gold_count():
    report = evaluation.compute_metrics(*_labels(2, 1, 3, 4))
    assert report.per_class["Checkworthy"]["support"] == 3.0
    assert report.per_class["Not_Checkworthy"]["support"] == 7.0


def test_weighted_f1_weights_by_support():
    report = evaluation.compute_metrics(*_labels(8, 0, 0, 2))
    per = report.per_class
    expect = (per["Checkworthy"]["f1"] * 8 + per["Not_Checkworthy"]["f1"] * 2) / 10
    assert report.weighted_f1 == expect


def test_length_mismatch_and_empty():
    with pytest.raises(evaluation.LengthMismatch):
        evaluation.compute_metrics([CW], [])
    with pytest.raises(evaluation.Empty):
        evaluation.compute_metrics([], [])


def test_report_round_trip_with_skips():
    report = evaluation.compute_metrics(*_labels(2, 1, 1, 2))
    report = replace(report, skipped=(("v9", "decoder exit 3"),))
    back = evaluation.report_from_dict(evaluation.report_to_dict(report))
    assert back == report
    assert evaluation.report_id(back) == evaluation.report_id(report)


def _sig(n_verdicts):
    order = (SemanticClass.hostile, SemanticClass.contentious_issue, SemanticClass.political)
    return ModalitySignals(
        transcript="words",
        transcript_verdict=order[0] if n_verdicts >= 1 else SemanticClass.benign,
        summary_verdict=order[1] if n_verdicts >= 2 else SemanticClass.benign,
        overlay_verdict=order[2] if n_verdicts >= 3 else SemanticClass.benign,
    )


def test_run_eval_scores_signal_records():
    records = [
        DatasetRecord("a", CW, signals=_sig(2)),
        DatasetRecord("b", NCW, signals=_sig(0)),
        DatasetRecord("c", CW, signals=_sig(0)),  # miss
    ]
    report = evaluation.run_eval(records, PipelineConfig())
    assert report.n == 3
    assert report.accuracy == pytest.approx(2 / 3)
    assert [p.video_id for p in report.predictions] == ["a", "b", "c"]


def test_run_eval_skips_failures_without_dropping_silently():
    records = [
        DatasetRecord("ok", CW, signals=_sig(2)),
        DatasetRecord("gone", CW, media_path="/nonexistent.avi"),
    ]
    report = evaluation.run_eval(records, PipelineConfig())  # no analyzer provided
    assert report.n == 1
    assert len(report.skipped) == 1
    assert report.skipped[0][0] == "gone"
    assert report.skipped[0][1]  # reason text present


def test_run_eval_all_skipped_raises_empty():
    records = [DatasetRecord("gone", CW, media_path="/nonexistent.avi")]
    with pytest.raises(evaluation.Empty):
        evaluation.run_eval(records, PipelineConfig())


def test_run_eval_uses_media_analyzer():
    class FakeRecord:
        class result:
            label = CW

    calls = []

    def analyze_media(path, config):
        calls.append(path)
        return FakeRecord()

    records = [DatasetRecord("m", CW, media_path="clip.avi")]
    report = evaluation.run_eval(records, PipelineConfig(), analyze_media=analyze_media)
    assert calls == ["clip.avi"]
    assert report.accuracy == 1.0


def test_dataset_file_round_trip(tmp_path):
    records = [
        DatasetRecord("a", CW, language="en", signals=_sig(2)),
        DatasetRecord("b", NCW, media_path="x.avi"),
    ]
    path = tmp_path / "data.jsonl"
    evaluation.save_dataset(records, path)
    assert evaluation.load_dataset(path) == records


def test_load_dataset_reports_bad_lines(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"video_id": "x", "gold_label": "Nope", "signals": {}}\n', encoding="utf-8")
    with pytest.raises(ValueError) as err:
        evaluation.load_dataset(path)
    assert ":1:" in str(err.value)


def test_ablation_rejects_unknown_module():
    records = [DatasetRecord("a", CW, signals=_sig(2))]
    with pytest.raises(evaluation.UnknownModule):
        evaluation.run_ablation(records, PipelineConfig(), modules=["nonexistent"])


def test_ablation_baseline_matches_run_eval():
    records = [
        DatasetRecord("a", CW, signals=_sig(2)),
        DatasetRecord("b", NCW, signals=_sig(0)),
    ]
    cfg = PipelineConfig()
    table = evaluation.run_ablation(records, cfg)
    assert table.baseline == evaluation.run_eval(records, cfg)
    assert [row.module for row in table.rows] == [
        m for m in ("transcription", "ocr", "video_summary", "buzzword", "fact_check", "deepfake", "ad_filter")
    ]


def test_ablation_deltas_carry_sign():
    # both verdicts live on transcript+summary; removing transcription
    # drops every CW record below threshold
    records = [DatasetRecord(f"c{i}", CW, signals=_sig(2)) for i in range(4)]
    records += [DatasetRecord(f"n{i}", NCW, signals=_sig(0)) for i in range(4)]
    table = evaluation.run_ablation(records, PipelineConfig(), modules=["transcription", "deepfake"])
    by_module = {row.module: row for row in table.rows}
    assert by_module["transcription"].per_class_delta["Checkworthy"]["recall"] == -1.0
    assert by_module["transcription"].delta["accuracy"] == -0.5
    # deepfake never fires here: exact zero everywhere
    assert all(v == 0.0 for v in by_module["deepfake"].delta.values())


def test_ablation_renderings_show_explicit_signs():
    records = [DatasetRecord("a", CW, signals=_sig(2)), DatasetRecord("b", NCW, signals=_sig(0))]
    table = evaluation.run_ablation(records, PipelineConfig(), modules=["transcription"])
    text = evaluation.ablation_to_text(table)
    assert "baseline" in text.splitlines()[1]
    assert "+" in text or "-" in text
    csv = evaluation.ablation_to_csv(table)
    assert csv.splitlines()[2].startswith("transcription,")


def test_report_renderings_smoke():
    report = evaluation.compute_metrics(*_labels(5, 2, 1, 4))
    text = evaluation.report_to_text(report)
    assert "records: 12" in text
    assert "confusion" in text
    csv = evaluation.report_to_csv(report)
    assert csv.splitlines()[0].startswith("section,")
    assert any(line.startswith("per_class,Checkworthy") for line in csv.splitlines())


class ScriptedTransport:
    """Returns a fixed score per frame-set digest; optionally always fails."""

    def __init__(self, score=None, fail=False, by_first_frame=None):
        self.score = score
        self.fail = fail
        self.by_first_frame = by_first_frame or {}

    def call(self, backend, op, payload):
        if self.fail:
            raise BackendUnavailable(backend, "scripted outage")
        if self.by_first_frame:
            return {"score": self.by_first_frame[payload["frames_b64"][0]]}
        return {"score": self.score}

    def close(self):
        pass


def _frame_records():
    recs = []
    for i in range(4):
        blob = base64.b64encode(f"fake-{i}".encode()).decode()
        recs.append(evaluation.FrameSetRecord(f"f{i}", (blob,), True))
    for i in range(4):
        blob = base64.b64encode(f"real-{i}".encode()).decode()
        recs.append(evaluation.FrameSetRecord(f"r{i}", (blob,), False))
    return recs


def test_deepfake_bench_perfect_backend():
    scores = {}
    for rec in _frame_records():
        scores[rec.frames_b64[0]] = 0.9 if rec.is_fake else 0.1
    rows = evaluation.compare_deepfake_backends(
        _frame_records(),
        PipelineConfig(),
        backends={"good": ""},
        transport_factory=lambda name, url: ScriptedTransport(by_first_frame=scores),
    )
    (row,) = rows
    assert row.accuracy == 1.0 and row.f1 == 1.0 and row.error is None


def test_deepfake_bench_unreachable_backend_gets_error_row():
    rows = evaluation.compare_deepfake_backends(
        _frame_records(),
        PipelineConfig(),
        backends={"down": "", "up": ""},
        transport_factory=lambda name, url: ScriptedTransport(
            score=0.9, fail=(name == "down")
        ),
    )
    by_name = {r.backend: r for r in rows}
    assert by_name["down"].error is not None
    assert by_name["up"].error is None
    assert by_name["up"].recall == 1.0  # scores everything fake


def test_deepfake_bench_empty_dataset():
    with pytest.raises(evaluation.Empty):
        evaluation.compare_deepfake_backends([], PipelineConfig())


def test_frame_dataset_loader_validates(tmp_path):
    path = tmp_path / "frames.jsonl"
    path.write_text('{"id": "x", "label": "synthetic", "frames_b64": []}\n', encoding="utf-8")
    with pytest.raises(ValueError):
        evaluation.load_frame_dataset(path)
    path.write_text('{"id": "x", "label": "fake", "frames_b64": ["!!!"]}\n', encoding="utf-8")
    with pytest.raises(ValueError):
        evaluation.load_frame_dataset(path)


def _brute_metrics(golds, preds):
    """Independent oracle: explicit loops per class, same arithmetic shape."""
    labels = ["Checkworthy", "Not_Checkworthy"]
    per = {}
    for cls in labels:
        tp = sum(1 for g, p in zip(golds, preds) if g.value == cls and p.value == cls)
        fp = sum(1 for g, p in zip(golds, preds) if g.value != cls and p.value == cls)
        fn = sum(1 for g, p in zip(golds, preds) if g.value == cls and p.value != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per[cls] = {"precision": precision, "recall": recall, "f1": f1, "support": float(tp + fn)}
    macro = {m: sum(per[c][m] for c in labels) / len(labels) for m in ("precision", "recall", "f1")}
    weighted = sum(per[c]["f1"] * per[c]["support"] for c in labels) / len(golds)
    accuracy = sum(1 for g, p in zip(golds, preds) if g == p) / len(golds)
    return per, macro, weighted, accuracy


def test_metrics_match_brute_force_oracle():
    rng = random.Random(1234)
    for _ in range(50):
        n = rng.randint(1, 60)
        golds = [rng.choice([CW, NCW]) for _ in range(n)]
        preds = [rng.choice([CW, NCW]) for _ in range(n)]
        report = evaluation.compute_metrics(golds, preds)
        per, macro, weighted, accuracy = _brute_metrics(golds, preds)
        assert report.per_class == per
        assert report.macro == macro
        assert report.weighted_f1 == weighted
        assert report.accuracy == accuracy
