"""Content-addressed result store.

Plain files under a root directory, no database: analyses are keyed by
(video_id, config_digest), evaluation reports by their content digest.
Every write goes to a temp file in the destination directory first and is
renamed into place, so readers never observe a partial record. Keys are
append-only: the first write wins and re-writes are no-ops, which is what
makes cached re-analysis byte-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from . import evaluation


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    # -- analyses ---------------------------------------------------------

    def analysis_path(self, video_id: str, config_digest: str) -> Path:
        return self.root / "analyses" / video_id / f"{config_digest}.json"

    def save_analysis(self, video_id: str, config_digest: str, record_bytes: bytes) -> Path:
        """Persist a record unless this key already holds one (first write wins)."""
        path = self.analysis_path(video_id, config_digest)
        if not path.exists():
            _atomic_write(path, record_bytes)
        return path

    def load_analysis(self, video_id: str, config_digest: str) -> bytes | None:
        path = self.analysis_path(video_id, config_digest)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            return None

    def list_analyses(self, video_id: str) -> list[str]:
        """Config digests stored for a video."""
        d = self.root / "analyses" / video_id
        if not d.is_dir():
            return []
        return sorted(p.stem for p in d.glob("*.json"))

    # -- evaluation reports -----------------------------------------------

    def save_report(self, report: evaluation.EvalReport, created_at: str) -> str:
        rid = evaluation.report_id(report)
        payload = {"id": rid, "created_at": created_at, "report": evaluation.report_to_dict(report)}
        path = self.root / "eval_reports" / f"{rid}.json"
        if not path.exists():
            _atomic_write(path, json.dumps(payload, ensure_ascii=False, sort_keys=True).encode("utf-8"))
        return rid

    def load_report(self, report_id: str) -> tuple[evaluation.EvalReport, str] | None:
        path = self.root / "eval_reports" / f"{report_id}.json"
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None
        return evaluation.report_from_dict(payload["report"]), payload.get("created_at", "")

    def list_reports(self) -> list[dict]:
        d = self.root / "eval_reports"
        out = []
        if d.is_dir():
            for path in sorted(d.glob("*.json")):
                payload = json.loads(path.read_text(encoding="utf-8"))
                report = payload.get("report", {})
                out.append(
                    {
                        "id": payload.get("id", path.stem),
                        "created_at": payload.get("created_at", ""),
                        "n": report.get("n"),
                        "accuracy": report.get("accuracy"),
                    }
                )
        return out

    # -- uploads ----------------------------------------------------------

    def upload_dir(self) -> Path:
        d = self.root / "uploads"
        d.mkdir(parents=True, exist_ok=True)
        return d

    def work_dir(self, video_id: str) -> Path:
        d = self.root / "work" / video_id
        d.mkdir(parents=True, exist_ok=True)
        return d
