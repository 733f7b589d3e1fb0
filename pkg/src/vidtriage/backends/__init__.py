"""HTTP backends for transcription, OCR, captioning, classification,
deepfake scoring, and claim work, plus a mock server for offline runs."""

from .envelope import BackendClient, BackendProtocolError, BackendUnavailable, request_digest
from .clients import (
    AnalysisBackends,
    HttpTransport,
    PromptTemplate,
    ReplayTransport,
    parse_semantic_class,
    parse_stance,
)
from .mock import MockBackend

__all__ = [
    "AnalysisBackends",
    "BackendClient",
    "BackendProtocolError",
    "BackendUnavailable",
    "HttpTransport",
    "MockBackend",
    "PromptTemplate",
    "ReplayTransport",
    "parse_semantic_class",
    "parse_stance",
    "request_digest",
]
