"""In-process mock backend server.

Serves recorded responses keyed by the canonical request digest, so an
offline run replays exactly what a live backend once answered. Scripted
handlers and failure injection cover the remaining test surface: protocol
errors, retries, and timeouts.

Resolution order per request: injected failures, scripted handler for the
op, recorded response for the digest. Anything else is a 400 with the
digest in the body, which the client surfaces without retrying.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Callable

from .envelope import request_digest

Handler = Callable[[dict], dict]


class MockBackend:
    def __init__(self):
        self.recorded: dict[str, dict] = {}
        self.handlers: dict[str, Handler] = {}
        self._failures: dict[str, list[int]] = {}
        self.calls: list[tuple[str, str]] = []  # (op, digest) in arrival order
        self.auth_headers: list[str | None] = []  # Authorization value per request
        self._lock = threading.Lock()
        self._server: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    # -- configuration ----------------------------------------------------

    def load_recorded(self, path: str | Path) -> int:
        """Load a recordings file: {digest: {"op": ..., "status": ..., "body": ...}}."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        self.recorded.update(data)
        return len(data)

    def record(self, op: str, payload: dict, body: dict, status: int = 200) -> str:
        d = request_digest(op, payload)
        self.recorded[d] = {"op": op, "status": status, "body": body}
        return d

    def script(self, op: str, handler: Handler) -> None:
        self.handlers[op] = handler

    def fail_next(self, op: str, times: int = 1, status: int = 500) -> None:
        self._failures.setdefault(op, []).extend([status] * times)

    def call_count(self, op: str | None = None) -> int:
        if op is None:
            return len(self.calls)
        return sum(1 for o, _ in self.calls if o == op)

    # -- request handling -------------------------------------------------

    def _respond(self, envelope: dict) -> tuple[int, dict]:
        op = envelope.get("op", "")
        payload = envelope.get("payload")
        if not isinstance(op, str) or not isinstance(payload, dict):
            return 400, {"error": "envelope must carry 'op' and 'payload'"}
        d = request_digest(op, payload)
        with self._lock:
            self.calls.append((op, d))
            pending = self._failures.get(op)
            if pending:
                return pending.pop(0), {"error": "injected failure"}
        if op in self.handlers:
            return 200, self.handlers[op](payload)
        if d in self.recorded:
            entry = self.recorded[d]
            return int(entry.get("status", 200)), entry["body"]
        return 400, {"error": f"no recorded response for digest {d}", "op": op}

    # -- lifecycle --------------------------------------------------------

    @property
    def url(self) -> str:
        if self._server is None:
            raise RuntimeError("mock backend is not running")
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "MockBackend":
        backend = self

        class _Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                backend.auth_headers.append(self.headers.get("Authorization"))
                length = int(self.headers.get("Content-Length", 0))
                raw = self.rfile.read(length)
                try:
                    envelope = json.loads(raw.decode("utf-8"))
                except (UnicodeDecodeError, json.JSONDecodeError):
                    status, body = 400, {"error": "request body is not JSON"}
                else:
                    status, body = backend._respond(envelope)
                data = json.dumps(body).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, fmt, *args):
                pass  # keep test output clean

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

    def __enter__(self) -> "MockBackend":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
