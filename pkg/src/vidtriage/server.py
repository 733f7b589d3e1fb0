"""HTTP service over the analysis pipeline and the result store.

POST /videos                 submit an upload or {"url": ...} -> {video_id, job_id}
GET  /jobs/{job_id}          job state
GET  /videos/{id}/analysis   stored analysis record (exact stored bytes)
GET  /videos/{id}/factchecks claim results with evidence links
GET  /eval/reports           stored evaluation report summaries
GET  /eval/reports/{id}      one full report, per-record predictions included
GET  /eval/reports/{id}/confusion   confusion matrix for one report
GET  /config                 active config, secrets redacted

Uploads are probed synchronously so admission errors (too long, unreadable,
not a video) come back on the POST as 422 with a machine-readable reason;
the analysis itself runs on a bounded worker pool.
"""

from __future__ import annotations

import json
import logging
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from urllib.parse import urlsplit, urlunsplit

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import evaluation, ingest, pipeline, serialize
from .backends.clients import AnalysisBackends, HttpTransport
from .config import PipelineConfig, config_digest, config_to_dict
from .store import Store

log = logging.getLogger(__name__)


def _redact_url(url: str) -> str:
    parts = urlsplit(url)
    host = parts.hostname or ""
    if parts.port:
        host = f"{host}:{parts.port}"
    return urlunsplit((parts.scheme, host, parts.path, "", ""))


def _redacted_config(config: PipelineConfig) -> dict:
    data = config_to_dict(config)
    data["endpoints"] = {k: _redact_url(v) for k, v in data.get("endpoints", {}).items()}
    return data


class _Jobs:
    """In-memory job table plus the duplicate-submission guard."""

    def __init__(self):
        self._lock = threading.Lock()
        self._jobs: dict[str, dict] = {}
        self._in_flight: dict[tuple[str, str], str] = {}  # (video_id, cfg digest) -> job_id

    def submit(self, video_id: str, cfg_digest: str) -> tuple[str, str | None]:
        """Register a new job; returns (job_id, None) or (existing, 'duplicate')."""
        with self._lock:
            key = (video_id, cfg_digest)
            if key in self._in_flight:
                return self._in_flight[key], "duplicate"
            job_id = uuid.uuid4().hex[:12]
            self._jobs[job_id] = {"job_id": job_id, "video_id": video_id, "status": "queued", "error": None}
            self._in_flight[key] = job_id
            return job_id, None

    def update(self, job_id: str, status: str, error: str | None = None) -> None:
        with self._lock:
            job = self._jobs[job_id]
            job["status"] = status
            job["error"] = error
            if status in ("done", "failed"):
                self._in_flight = {k: v for k, v in self._in_flight.items() if v != job_id}

    def get(self, job_id: str) -> dict | None:
        with self._lock:
            job = self._jobs.get(job_id)
            return dict(job) if job else None


def create_app(
    config: PipelineConfig,
    transport_factory=None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    """Service instance bound to one config and one store directory.

    ``transport_factory()`` supplies the backend transport per analysis job;
    the default opens live HTTP clients. ``ui_dir`` mounts static assets at
    /ui when the directory exists.
    """
    if transport_factory is None:
        transport_factory = lambda: HttpTransport(config)

    app = FastAPI(title="video triage service", docs_url=None, redoc_url=None)
    store = Store(config.store_dir)
    jobs = _Jobs()
    executor = ThreadPoolExecutor(max_workers=max(config.workers, 1))
    cfg_digest = config_digest(config)

    def _error(status: int, reason: str, detail: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": reason, "detail": detail})

    def _run_job(job_id: str, path: str) -> None:
        jobs.update(job_id, "running")
        backends = AnalysisBackends(config, transport=transport_factory())
        try:
            pipeline.analyze(
                path,
                config,
                backends,
                store=store,
                work_dir=store.work_dir(ingest.video_id_for_file(path)),
            )
        except Exception as exc:
            log.warning("job %s failed: %s", job_id, exc)
            jobs.update(job_id, "failed", error=str(exc))
            return
        finally:
            backends.close()
        jobs.update(job_id, "done")

    @app.post("/videos")
    async def submit_video(request: Request):
        content_type = request.headers.get("content-type", "")
        upload_dir = store.upload_dir()
        if content_type.startswith("multipart/"):
            form = await request.form()
            upload = form.get("file")
            if upload is None or isinstance(upload, str):
                return _error(422, "BadRequest", "multipart form needs a 'file' field")
            tmp = upload_dir / f".incoming-{uuid.uuid4().hex}"
            size = 0
            with open(tmp, "wb") as out:
                while True:
                    chunk = await upload.read(1 << 20)
                    if not chunk:
                        break
                    size += len(chunk)
                    if size > config.max_upload_bytes:
                        out.close()
                        tmp.unlink(missing_ok=True)
                        return _error(413, "TooLarge", f"upload exceeds {config.max_upload_bytes} bytes")
                    out.write(chunk)
            video_id = ingest.video_id_for_file(tmp)
            path = upload_dir / f"{video_id}.bin"
            if path.exists():
                tmp.unlink(missing_ok=True)
            else:
                tmp.rename(path)
        else:
            try:
                body = await request.json()
            except Exception:
                return _error(422, "BadRequest", "expected multipart upload or JSON {'url': ...}")
            url = body.get("url") if isinstance(body, dict) else None
            if not url:
                return _error(422, "BadRequest", "expected multipart upload or JSON {'url': ...}")
            try:
                resolved = ingest.resolve_source(str(url), config, upload_dir)
            except ingest.IngestError as exc:
                return _error(422, type(exc).__name__, str(exc))
            video_id = ingest.video_id_for_file(resolved)
            path = upload_dir / f"{video_id}.bin"
            if not path.exists():
                if resolved.parent == upload_dir:
                    resolved.replace(path)
                else:
                    path.write_bytes(resolved.read_bytes())

        try:
            meta = ingest.probe(path, config)
            if meta["duration_s"] > ingest.MAX_DURATION_S:
                raise ingest.TooLong(meta["duration_s"])
        except ingest.IngestError as exc:
            return _error(422, type(exc).__name__, str(exc))

        job_id, dup = jobs.submit(video_id, cfg_digest)
        if dup:
            return _error(409, "Duplicate", f"job {job_id} already in flight for this video and config")
        executor.submit(_run_job, job_id, str(path))
        return {"video_id": video_id, "job_id": job_id}

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return _error(404, "NotFound", f"no job {job_id}")
        return job

    @app.get("/videos/{video_id}/analysis")
    def get_analysis(video_id: str):
        data = store.load_analysis(video_id, cfg_digest)
        if data is None:
            return _error(404, "NotFound", f"no analysis for video {video_id} under the active config")
        return Response(content=data, media_type="application/json")

    @app.get("/videos/{video_id}/factchecks")
    def get_factchecks(video_id: str):
        data = store.load_analysis(video_id, cfg_digest)
        if data is None:
            return _error(404, "NotFound", f"no analysis for video {video_id} under the active config")
        record = pipeline.record_from_dict(json.loads(data.decode("utf-8")))
        return {
            "video_id": video_id,
            "claims": [serialize.claim_result_to_dict(c) for c in record.signals.claim_results],
        }

    @app.get("/eval/reports")
    def list_reports():
        return {"reports": store.list_reports()}

    @app.get("/eval/reports/{report_id}")
    def get_report(report_id: str):
        loaded = store.load_report(report_id)
        if loaded is None:
            return _error(404, "NotFound", f"no evaluation report {report_id}")
        report, created_at = loaded
        return {"id": report_id, "created_at": created_at, "report": evaluation.report_to_dict(report)}

    @app.get("/eval/reports/{report_id}/confusion")
    def report_confusion(report_id: str):
        loaded = store.load_report(report_id)
        if loaded is None:
            return _error(404, "NotFound", f"no evaluation report {report_id}")
        report, created_at = loaded
        labels = list(report.confusion)
        return {
            "id": report_id,
            "created_at": created_at,
            "labels": labels,
            "matrix": [[report.confusion[g][p] for p in labels] for g in labels],
            "n": report.n,
        }

    @app.get("/config")
    def get_config():
        return _redacted_config(config)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
