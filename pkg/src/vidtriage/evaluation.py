"""Evaluation harness: metrics, dataset runs, ablations, deepfake bench.

Metrics treat Checkworthy as the positive class and follow the 0/0 -> 0
convention everywhere a ratio can degenerate. Per-class F1 is the harmonic
mean of that class's precision and recall; combined figures are reported
both macro-averaged and support-weighted.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, replace
from pathlib import Path

from . import decision, serialize
from .backends.clients import HttpTransport
from .backends.envelope import BackendUnavailable
from .config import KNOWN_MODULES, PipelineConfig
from .model import DatasetRecord, Label, ModalitySignals


class LengthMismatch(Exception):
    pass


class Empty(Exception):
    pass


class UnknownModule(Exception):
    def __init__(self, module: str):
        super().__init__(f"unknown module {module!r} (known: {', '.join(KNOWN_MODULES)})")
        self.module = module


@dataclass(frozen=True)
class RecordPrediction:
    video_id: str
    gold: Label
    pred: Label


@dataclass(frozen=True)
class EvalReport:
    n: int
    accuracy: float
    per_class: dict[str, dict[str, float]]  # label -> precision/recall/f1/support
    macro: dict[str, float]  # precision/recall/f1
    weighted_f1: float
    confusion: dict[str, dict[str, int]]  # gold label -> pred label -> count
    predictions: tuple[RecordPrediction, ...]
    skipped: tuple[tuple[str, str], ...] = ()


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def compute_metrics(
    golds: list[Label], preds: list[Label], video_ids: list[str] | None = None
) -> EvalReport:
    """Full metric report for parallel gold/prediction sequences."""
    if len(golds) != len(preds):
        raise LengthMismatch(f"{len(golds)} golds vs {len(preds)} predictions")
    if not golds:
        raise Empty("no records to score")
    if video_ids is None:
        video_ids = [str(i) for i in range(len(golds))]

    labels = [Label.checkworthy, Label.not_checkworthy]
    confusion = {g.value: {p.value: 0 for p in labels} for g in labels}
    for g, p in zip(golds, preds):
        confusion[g.value][p.value] += 1

    n = len(golds)
    per_class: dict[str, dict[str, float]] = {}
    for cls in labels:
        tp = confusion[cls.value][cls.value]
        fp = sum(confusion[other.value][cls.value] for other in labels if other is not cls)
        fn = sum(confusion[cls.value][other.value] for other in labels if other is not cls)
        precision = _ratio(tp, tp + fp)
        recall = _ratio(tp, tp + fn)
        f1 = _ratio(2 * precision * recall, precision + recall)
        per_class[cls.value] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": float(tp + fn),
        }

    macro = {
        metric: sum(per_class[c.value][metric] for c in labels) / len(labels)
        for metric in ("precision", "recall", "f1")
    }
    weighted_f1 = sum(per_class[c.value]["f1"] * per_class[c.value]["support"] for c in labels) / n
    accuracy = sum(confusion[c.value][c.value] for c in labels) / n
    predictions = tuple(
        RecordPrediction(video_id=i, gold=g, pred=p) for i, g, p in zip(video_ids, golds, preds)
    )
    return EvalReport(
        n=n,
        accuracy=accuracy,
        per_class=per_class,
        macro=macro,
        weighted_f1=weighted_f1,
        confusion=confusion,
        predictions=predictions,
    )


# -- dataset I/O ----------------------------------------------------------


def load_dataset(path: str | Path) -> list[DatasetRecord]:
    """One record per JSON line; see docs/datasets.md for the schema."""
    records = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            records.append(serialize.dataset_record_from_dict(json.loads(raw)))
        except (KeyError, ValueError, TypeError) as exc:
            raise ValueError(f"{path}:{lineno}: bad record: {exc}") from exc
    return records


def save_dataset(records: list[DatasetRecord], path: str | Path) -> None:
    lines = [
        json.dumps(serialize.dataset_record_to_dict(rec), ensure_ascii=False, sort_keys=True)
        for rec in records
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- dataset runs ---------------------------------------------------------


def run_eval(
    records: list[DatasetRecord],
    config: PipelineConfig,
    analyze_media=None,
) -> EvalReport:
    """Score every record and compute metrics.

    Records with recorded signals go straight through the decision engine;
    records with only a media path need ``analyze_media(path, config)``
    (the full pipeline). Per-record failures land in the skipped section
    rather than aborting the run.
    """
    golds: list[Label] = []
    preds: list[Label] = []
    ids: list[str] = []
    skipped: list[tuple[str, str]] = []
    for rec in records:
        try:
            if rec.signals is not None:
                pred = decision.score(rec.signals, config).label
            elif analyze_media is not None:
                pred = analyze_media(rec.media_path, config).result.label
            else:
                raise RuntimeError("record has no recorded signals and no analyzer is available")
        except Exception as exc:
            skipped.append((rec.video_id, str(exc)))
            continue
        golds.append(rec.gold_label)
        preds.append(pred)
        ids.append(rec.video_id)
    if not golds:
        raise Empty("no records produced predictions" + (f" ({len(skipped)} skipped)" if skipped else ""))
    report = compute_metrics(golds, preds, ids)
    return replace(report, skipped=tuple(skipped))


@dataclass(frozen=True)
class AblationRow:
    module: str
    report: EvalReport
    delta: dict[str, float]  # macro precision/recall, accuracy, weighted_f1
    per_class_delta: dict[str, dict[str, float]]  # label -> precision/recall/f1


@dataclass(frozen=True)
class AblationTable:
    baseline: EvalReport
    rows: tuple[AblationRow, ...]


def run_ablation(
    records: list[DatasetRecord],
    config: PipelineConfig,
    modules: list[str] | None = None,
    analyze_media=None,
) -> AblationTable:
    """Metric deltas from removing each module, against the full baseline."""
    if modules is None:
        modules = [m for m in KNOWN_MODULES if config.enabled(m)]
    for module in modules:
        if module not in KNOWN_MODULES:
            raise UnknownModule(module)
    baseline = run_eval(records, config, analyze_media)
    rows = []
    for module in modules:
        report = run_eval(records, config.with_disabled(module), analyze_media)
        delta = {
            "precision": report.macro["precision"] - baseline.macro["precision"],
            "recall": report.macro["recall"] - baseline.macro["recall"],
            "accuracy": report.accuracy - baseline.accuracy,
            "weighted_f1": report.weighted_f1 - baseline.weighted_f1,
        }
        per_class_delta = {
            cls: {
                metric: report.per_class[cls][metric] - baseline.per_class[cls][metric]
                for metric in ("precision", "recall", "f1")
            }
            for cls in report.per_class
        }
        rows.append(
            AblationRow(module=module, report=report, delta=delta, per_class_delta=per_class_delta)
        )
    return AblationTable(baseline=baseline, rows=tuple(rows))


# -- deepfake backend comparison ------------------------------------------


@dataclass(frozen=True)
class FrameSetRecord:
    frame_set_id: str
    frames_b64: tuple[str, ...]
    is_fake: bool


@dataclass(frozen=True)
class DeepfakeBenchRow:
    backend: str
    n: int = 0
    accuracy: float = 0.0
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    error: str | None = None


def load_frame_dataset(path: str | Path) -> list[FrameSetRecord]:
    records = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        obj = json.loads(raw)
        label = str(obj.get("label", ""))
        if label not in ("fake", "real"):
            raise ValueError(f"{path}:{lineno}: label must be 'fake' or 'real'")
        frames = obj.get("frames_b64") or []
        for f in frames:
            base64.b64decode(f, validate=True)  # fail fast on corrupt fixtures
        records.append(
            FrameSetRecord(
                frame_set_id=str(obj.get("id", lineno)),
                frames_b64=tuple(str(f) for f in frames),
                is_fake=label == "fake",
            )
        )
    return records


def compare_deepfake_backends(
    records: list[FrameSetRecord],
    config: PipelineConfig,
    backends: dict[str, str] | None = None,
    transport_factory=None,
) -> list[DeepfakeBenchRow]:
    """Binary fake/real metrics per scoring backend, fake as positive class.

    ``backends`` maps display name -> endpoint URL; default is the single
    configured deepfake endpoint. A backend that cannot be reached gets an
    error row; the others are still reported. ``transport_factory(name, url)``
    overrides how each backend is reached (fixture replay, tests).
    """
    if not records:
        raise Empty("no labeled frame sets")
    if backends is None:
        backends = {"deepfake": config.endpoints.get("deepfake", "")}
    if transport_factory is None:
        def transport_factory(name: str, url: str):
            return HttpTransport(replace(config, endpoints={**config.endpoints, "deepfake": url}))
    rows = []
    for name, url in backends.items():
        transport = transport_factory(name, url)
        try:
            tp = fp = fn = tn = 0
            for rec in records:
                body = transport.call("deepfake", "deepfake", {"frames_b64": list(rec.frames_b64)})
                pred_fake = float(body["score"]) >= config.deepfake_trigger
                if rec.is_fake and pred_fake:
                    tp += 1
                elif rec.is_fake:
                    fn += 1
                elif pred_fake:
                    fp += 1
                else:
                    tn += 1
        except BackendUnavailable as exc:
            rows.append(DeepfakeBenchRow(backend=name, error=str(exc)))
            continue
        finally:
            transport.close()
        precision = _ratio(tp, tp + fp)
        recall = _ratio(tp, tp + fn)
        rows.append(
            DeepfakeBenchRow(
                backend=name,
                n=len(records),
                accuracy=_ratio(tp + tn, len(records)),
                precision=precision,
                recall=recall,
                f1=_ratio(2 * precision * recall, precision + recall),
            )
        )
    return rows


# -- serialization and rendering ------------------------------------------


def report_to_dict(report: EvalReport) -> dict:
    return {
        "n": report.n,
        "accuracy": report.accuracy,
        "per_class": report.per_class,
        "macro": report.macro,
        "weighted_f1": report.weighted_f1,
        "confusion": report.confusion,
        "predictions": [
            {"video_id": p.video_id, "gold": p.gold.value, "pred": p.pred.value}
            for p in report.predictions
        ],
        "skipped": [{"video_id": v, "reason": r} for v, r in report.skipped],
    }


def report_from_dict(data: dict) -> EvalReport:
    return EvalReport(
        n=int(data["n"]),
        accuracy=float(data["accuracy"]),
        per_class={k: dict(v) for k, v in data["per_class"].items()},
        macro=dict(data["macro"]),
        weighted_f1=float(data["weighted_f1"]),
        confusion={g: {p: int(c) for p, c in row.items()} for g, row in data["confusion"].items()},
        predictions=tuple(
            RecordPrediction(p["video_id"], Label(p["gold"]), Label(p["pred"]))
            for p in data["predictions"]
        ),
        skipped=tuple((s["video_id"], s["reason"]) for s in data.get("skipped", [])),
    )


def report_id(report: EvalReport) -> str:
    return serialize.digest(report_to_dict(report))[:16]


def report_to_text(report: EvalReport) -> str:
    lines = [f"records: {report.n}    accuracy: {report.accuracy:.3f}"]
    lines.append(f"{'class':<17} {'P':>6} {'R':>6} {'F1':>6} {'support':>8}")
    for cls, m in report.per_class.items():
        lines.append(
            f"{cls:<17} {m['precision']:>6.3f} {m['recall']:>6.3f} {m['f1']:>6.3f} {int(m['support']):>8}"
        )
    lines.append(
        f"{'macro':<17} {report.macro['precision']:>6.3f} {report.macro['recall']:>6.3f} {report.macro['f1']:>6.3f}"
    )
    lines.append(f"weighted F1: {report.weighted_f1:.3f}")
    lines.append("confusion (rows gold, cols predicted):")
    cols = list(report.confusion)
    lines.append(f"{'':<17} " + " ".join(f"{c:>16}" for c in cols))
    for gold in cols:
        lines.append(
            f"{gold:<17} " + " ".join(f"{report.confusion[gold][p]:>16}" for p in cols)
        )
    if report.skipped:
        lines.append(f"skipped: {len(report.skipped)}")
        for video_id, reason in report.skipped:
            lines.append(f"  {video_id}: {reason}")
    return "\n".join(lines)


def report_to_csv(report: EvalReport) -> str:
    rows = ["section,label,precision,recall,f1,support"]
    for cls, m in report.per_class.items():
        rows.append(
            f"per_class,{cls},{m['precision']:.6f},{m['recall']:.6f},{m['f1']:.6f},{int(m['support'])}"
        )
    rows.append(
        f"macro,,{report.macro['precision']:.6f},{report.macro['recall']:.6f},{report.macro['f1']:.6f},{report.n}"
    )
    rows.append(f"accuracy,,{report.accuracy:.6f},,,{report.n}")
    rows.append(f"weighted_f1,,,,{report.weighted_f1:.6f},{report.n}")
    for gold, row in report.confusion.items():
        for pred, count in row.items():
            rows.append(f"confusion,{gold}->{pred},,,,{count}")
    return "\n".join(rows)


def ablation_to_text(table: AblationTable) -> str:
    b = table.baseline
    lines = [
        f"{'module':<16} {'dP':>8} {'dR':>8} {'dAcc':>8} {'dF1-W':>8}",
        f"{'baseline':<16} {b.macro['precision']:>8.3f} {b.macro['recall']:>8.3f} "
        f"{b.accuracy:>8.3f} {b.weighted_f1:>8.3f}",
    ]
    for row in table.rows:
        d = row.delta
        lines.append(
            f"-{row.module:<15} {d['precision']:>+8.3f} {d['recall']:>+8.3f} "
            f"{d['accuracy']:>+8.3f} {d['weighted_f1']:>+8.3f}"
        )
    return "\n".join(lines)


def ablation_to_csv(table: AblationTable) -> str:
    b = table.baseline
    rows = ["module,delta_precision,delta_recall,delta_accuracy,delta_weighted_f1"]
    rows.append(f"baseline,{b.macro['precision']:.6f},{b.macro['recall']:.6f},{b.accuracy:.6f},{b.weighted_f1:.6f}")
    for row in table.rows:
        d = row.delta
        rows.append(
            f"{row.module},{d['precision']:+.6f},{d['recall']:+.6f},{d['accuracy']:+.6f},{d['weighted_f1']:+.6f}"
        )
    return "\n".join(rows)


def deepfake_bench_to_text(rows: list[DeepfakeBenchRow]) -> str:
    lines = [f"{'backend':<16} {'Acc':>6} {'P':>6} {'R':>6} {'F1':>6}"]
    for row in rows:
        if row.error:
            lines.append(f"{row.backend:<16} error: {row.error}")
        else:
            lines.append(
                f"{row.backend:<16} {row.accuracy:>6.3f} {row.precision:>6.3f} "
                f"{row.recall:>6.3f} {row.f1:>6.3f}"
            )
    return "\n".join(lines)


def deepfake_bench_to_csv(rows: list[DeepfakeBenchRow]) -> str:
    out = ["backend,n,accuracy,precision,recall,f1,error"]
    for row in rows:
        out.append(
            f"{row.backend},{row.n},{row.accuracy:.6f},{row.precision:.6f},"
            f"{row.recall:.6f},{row.f1:.6f},{row.error or ''}"
        )
    return "\n".join(out)
