"""Pipeline configuration: toggles, weights, threshold, endpoints.

The whole decision policy lives in config so it can be tuned without
touching code. ``validate`` reports every violated field invariant;
``config_digest`` gives the stable hash that keys cached analysis
records.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .serialize import digest

# Toggleable pipeline modules. "weapon" ships disabled: it exists only so
# the ablation mechanics can express removing it.
KNOWN_MODULES = (
    "transcription",
    "ocr",
    "video_summary",
    "buzzword",
    "fact_check",
    "deepfake",
    "weapon",
    "ad_filter",
)

# Scoring signals recognized by the decision engine, i.e. the valid keys
# of the weights map.
KNOWN_SIGNALS = (
    "verdict.transcript",
    "verdict.summary",
    "verdict.overlay",
    "buzzword",
    "claim.refuted",
    "claim.present",
    "deepfake",
    "weapon",
)

# Remote model backends the clients talk to.
BACKEND_NAMES = (
    "transcription",
    "ocr",
    "captioning",
    "classifier",
    "deepfake",
    "claim_detection",
    "claim_verification",
)

DEFAULT_WEIGHTS = {
    "verdict.transcript": 1.0,
    "verdict.summary": 1.0,
    "verdict.overlay": 1.0,
    "buzzword": 1.0,
    "claim.refuted": 2.0,
    "claim.present": 1.0,
    "deepfake": 1.0,
    "weapon": 0.0,
}

DEFAULT_TIMEOUT_MS = 10_000
DEFAULT_MAX_RETRIES = 2
DEFAULT_ENDPOINT = "http://127.0.0.1:8601"

TOKEN_ENV_PREFIX = "VIDTRIAGE_TOKEN_"


@dataclass(frozen=True)
class PipelineConfig:
    """Everything tunable about one pipeline run.

    Per-backend timeout/retry maps may be sparse; missing backends fall
    back to the defaults. ``lexicon_paths`` empty means "use the packaged
    sample lexicons". ``decoder_cmd`` of ("builtin",) resolves to the
    in-repo decoder tool; ``resolver_cmd`` empty means only local files
    are accepted as sources.
    """

    module_enabled: dict[str, bool] = field(
        default_factory=lambda: {m: (m != "weapon") for m in KNOWN_MODULES}
    )
    weights: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    threshold: float = 2.0
    frame_sample_rate_hz: float = 0.5
    max_frames: int = 32
    endpoints: dict[str, str] = field(
        default_factory=lambda: {name: DEFAULT_ENDPOINT for name in BACKEND_NAMES}
    )
    timeouts_ms: dict[str, int] = field(default_factory=dict)
    max_retries: dict[str, int] = field(default_factory=dict)
    lexicon_paths: tuple[str, ...] = ()
    deepfake_trigger: float = 0.5
    store_dir: str = "store"
    decoder_cmd: tuple[str, ...] = ("builtin",)
    resolver_cmd: tuple[str, ...] = ()
    max_upload_bytes: int = 100 * 2**20
    workers: int = 2

    def timeout_ms(self, backend: str) -> int:
        return int(self.timeouts_ms.get(backend, DEFAULT_TIMEOUT_MS))

    def retries(self, backend: str) -> int:
        return int(self.max_retries.get(backend, DEFAULT_MAX_RETRIES))

    def enabled(self, module: str) -> bool:
        return bool(self.module_enabled.get(module, True))

    def weight(self, signal: str) -> float:
        return float(self.weights.get(signal, DEFAULT_WEIGHTS.get(signal, 0.0)))

    def with_disabled(self, *modules: str) -> "PipelineConfig":
        toggles = dict(self.module_enabled)
        for m in modules:
            toggles[m] = False
        return replace(self, module_enabled=toggles)


def auth_token(backend: str) -> str | None:
    """Backend auth token from the environment, never from config files."""
    return os.environ.get(TOKEN_ENV_PREFIX + backend.upper()) or None


def config_to_dict(cfg: PipelineConfig) -> dict:
    return {
        "module_enabled": dict(cfg.module_enabled),
        "weights": dict(cfg.weights),
        "threshold": cfg.threshold,
        "frame_sample_rate_hz": cfg.frame_sample_rate_hz,
        "max_frames": cfg.max_frames,
        "endpoints": dict(cfg.endpoints),
        "timeouts_ms": dict(cfg.timeouts_ms),
        "max_retries": dict(cfg.max_retries),
        "lexicon_paths": list(cfg.lexicon_paths),
        "deepfake_trigger": cfg.deepfake_trigger,
        "store_dir": cfg.store_dir,
        "decoder_cmd": list(cfg.decoder_cmd),
        "resolver_cmd": list(cfg.resolver_cmd),
        "max_upload_bytes": cfg.max_upload_bytes,
        "workers": cfg.workers,
    }


def config_from_dict(data: dict) -> PipelineConfig:
    base = PipelineConfig()
    return PipelineConfig(
        module_enabled={**base.module_enabled, **(data.get("module_enabled") or {})},
        weights={**base.weights, **(data.get("weights") or {})},
        threshold=float(data.get("threshold", base.threshold)),
        frame_sample_rate_hz=float(data.get("frame_sample_rate_hz", base.frame_sample_rate_hz)),
        max_frames=int(data.get("max_frames", base.max_frames)),
        endpoints={**base.endpoints, **(data.get("endpoints") or {})},
        timeouts_ms=dict(data.get("timeouts_ms") or {}),
        max_retries=dict(data.get("max_retries") or {}),
        lexicon_paths=tuple(data.get("lexicon_paths") or ()),
        deepfake_trigger=float(data.get("deepfake_trigger", base.deepfake_trigger)),
        store_dir=str(data.get("store_dir", base.store_dir)),
        decoder_cmd=tuple(data.get("decoder_cmd") or base.decoder_cmd),
        resolver_cmd=tuple(data.get("resolver_cmd") or ()),
        max_upload_bytes=int(data.get("max_upload_bytes", base.max_upload_bytes)),
        workers=int(data.get("workers", base.workers)),
    )


def load_config(path: str | Path) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def save_config(cfg: PipelineConfig, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def config_digest(cfg: PipelineConfig) -> str:
    """Stable hash of the scoring-relevant configuration.

    Operational knobs that cannot change an analysis result (store
    location, worker count, upload cap) are excluded, so moving the store
    or resizing the pool does not invalidate cached records.
    """
    data = config_to_dict(cfg)
    for key in ("store_dir", "workers", "max_upload_bytes"):
        data.pop(key, None)
    return digest(data)


def validate(cfg: PipelineConfig) -> list[str]:
    """Return one message per violated invariant; empty list means valid."""
    out: list[str] = []
    if not cfg.threshold > 0:
        out.append("threshold must be > 0")
    for name in sorted(cfg.module_enabled):
        if name not in KNOWN_MODULES:
            out.append(f"module_enabled.{name} is not a known module")
    for name in sorted(cfg.weights):
        if name not in KNOWN_SIGNALS:
            out.append(f"weights.{name} is not a known signal")
        elif cfg.weights[name] < 0:
            out.append(f"weights.{name} must be non-negative")
    if not cfg.frame_sample_rate_hz > 0:
        out.append("frame_sample_rate_hz must be > 0")
    if cfg.max_frames < 1:
        out.append("max_frames must be >= 1")
    for name in sorted(cfg.timeouts_ms):
        if cfg.timeouts_ms[name] <= 0:
            out.append(f"timeouts_ms.{name} must be > 0")
    for name in sorted(cfg.max_retries):
        if cfg.max_retries[name] < 0:
            out.append(f"max_retries.{name} must be >= 0")
    if not 0.0 <= cfg.deepfake_trigger <= 1.0:
        out.append("deepfake_trigger must lie in [0, 1]")
    if cfg.max_upload_bytes <= 0:
        out.append("max_upload_bytes must be > 0")
    if cfg.workers < 1:
        out.append("workers must be >= 1")
    return out
