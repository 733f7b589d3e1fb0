"""Transport layer shared by every backend call.

Each call POSTs a JSON envelope ``{"op": ..., "payload": ...}`` to the
backend endpoint and expects a JSON result body. The canonical digest of
the envelope identifies the request; the mock server keys its recorded
responses on the same digest, so client and fixtures can never disagree
about what was asked.
"""

from __future__ import annotations

import logging

import httpx

from ..config import DEFAULT_ENDPOINT, PipelineConfig, auth_token
from ..serialize import digest

log = logging.getLogger(__name__)


class BackendUnavailable(Exception):
    """The backend could not serve the request (after retries, if allowed)."""

    def __init__(self, backend: str, detail: str):
        super().__init__(f"{backend}: {detail}")
        self.backend = backend
        self.detail = detail


class BackendProtocolError(Exception):
    """The backend answered with something the client cannot interpret."""

    def __init__(self, backend: str, detail: str):
        super().__init__(f"{backend}: {detail}")
        self.backend = backend
        self.detail = detail


def request_digest(op: str, payload: dict) -> str:
    return digest({"op": op, "payload": payload})


class BackendClient:
    """One backend's endpoint plus its retry budget.

    Retries cover transient failures only: connection errors and 5xx
    responses, up to ``1 + max_retries`` attempts total, no backoff sleeps.
    A 4xx response means the request itself is bad and fails immediately.
    """

    def __init__(self, name: str, config: PipelineConfig):
        self.name = name
        self.endpoint = config.endpoints.get(name, DEFAULT_ENDPOINT)
        self.timeout_s = config.timeout_ms(name) / 1000.0
        self.max_retries = config.retries(name)
        self._client: httpx.Client | None = None

    def _http(self) -> httpx.Client:
        if self._client is None:
            self._client = httpx.Client(timeout=self.timeout_s)
        return self._client

    def close(self) -> None:
        if self._client is not None:
            self._client.close()
            self._client = None

    def call(self, op: str, payload: dict) -> dict:
        envelope = {"op": op, "payload": payload}
        headers = {}
        token = auth_token(self.name)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        last_error = "no attempt made"
        for attempt in range(1 + self.max_retries):
            try:
                resp = self._http().post(self.endpoint, json=envelope, headers=headers)
            except httpx.HTTPError as exc:
                last_error = f"connection error: {exc}"
                log.debug("%s %s attempt %d failed: %s", self.name, op, attempt + 1, last_error)
                continue
            if resp.status_code >= 500:
                last_error = f"server error {resp.status_code}"
                log.debug("%s %s attempt %d failed: %s", self.name, op, attempt + 1, last_error)
                continue
            if resp.status_code >= 400:
                raise BackendUnavailable(self.name, f"request rejected ({resp.status_code}): {resp.text[:200]}")
            try:
                body = resp.json()
            except ValueError:
                raise BackendProtocolError(self.name, "response body is not JSON")
            if not isinstance(body, dict):
                raise BackendProtocolError(self.name, "response body is not a JSON object")
            return body
        raise BackendUnavailable(self.name, last_error)
