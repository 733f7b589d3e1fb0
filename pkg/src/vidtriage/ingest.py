"""Media ingestion: resolve a source, probe it, sample frames, split audio.

All decoding goes through an external decoder process pinned to a small CLI
contract (see ``vidtriage.decoder``), so the pipeline itself never links a
codec library. ``decoder_cmd = ("builtin",)`` selects the in-repo tool.
"""

from __future__ import annotations

import hashlib
import json
import subprocess
import sys
from pathlib import Path

from .config import PipelineConfig
from .model import MAX_DURATION_S, FrameSample, MediaBundle, VideoItem


class IngestError(Exception):
    """Base class for ingestion failures."""


class TooLong(IngestError):
    def __init__(self, duration_s: float, limit_s: float = MAX_DURATION_S):
        super().__init__(f"video is {duration_s:.1f}s, limit is {limit_s:.0f}s")
        self.duration_s = duration_s
        self.limit_s = limit_s


class Unreadable(IngestError):
    pass


class Unsupported(IngestError):
    pass


def sample_timestamps(duration_s: float, rate_hz: float, max_frames: int) -> list[float]:
    """Sampling instants in seconds for a clip of the given duration.

    The natural grid is every 1/rate_hz seconds starting at zero, half-open
    at the end. When that grid exceeds max_frames the instants are re-spaced
    evenly across the same span so coverage is preserved at lower density.
    """
    if duration_s <= 0 or rate_hz <= 0 or max_frames <= 0:
        raise ValueError("duration_s, rate_hz and max_frames must be positive")
    step = 1.0 / rate_hz
    n_natural = max(int(duration_s / step - 1e-9) + 1, 1)
    if n_natural <= max_frames:
        return [k * step for k in range(n_natural)]
    if max_frames == 1:
        return [0.0]
    span = duration_s - step
    return [span * k / (max_frames - 1) for k in range(max_frames)]


def video_id_for_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()[:16]


def _decoder_argv(config: PipelineConfig) -> list[str]:
    cmd = list(config.decoder_cmd)
    if cmd == ["builtin"]:
        return [sys.executable, "-m", "vidtriage.decoder"]
    return cmd


def _run_decoder(config: PipelineConfig, args: list[str]) -> subprocess.CompletedProcess:
    return subprocess.run(
        _decoder_argv(config) + args,
        capture_output=True,
        text=True,
        timeout=config.timeout_ms("decoder") / 1000 * 6,
    )


def probe(path: str | Path, config: PipelineConfig) -> dict:
    """Decoder metadata for a local file. Raises Unreadable or Unsupported."""
    proc = _run_decoder(config, ["probe", str(path)])
    if proc.returncode == 0:
        return json.loads(proc.stdout)
    detail = proc.stderr.strip() or f"decoder exit {proc.returncode}"
    if proc.returncode == 4:
        raise Unsupported(detail)
    raise Unreadable(detail)


def resolve_source(source: str, config: PipelineConfig, work_dir: Path) -> Path:
    """Map a source string to a local file, downloading via resolver_cmd if set."""
    if not source.startswith(("http://", "https://")):
        path = Path(source)
        if not path.is_file():
            raise Unreadable(f"{source}: no such file")
        return path
    if not config.resolver_cmd:
        raise Unreadable(f"{source}: remote sources need resolver_cmd configured")
    target = work_dir / "download.bin"
    proc = subprocess.run(
        list(config.resolver_cmd) + [source, str(target)],
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0 or not target.is_file():
        raise Unreadable(f"{source}: resolver failed ({proc.stderr.strip() or proc.returncode})")
    return target


def ingest(
    source: str,
    config: PipelineConfig,
    work_dir: str | Path,
    language_hint: str | None = None,
    title: str | None = None,
    description: str | None = None,
) -> MediaBundle:
    """Resolve, probe, and decompose a source into frames plus an audio track.

    Raises TooLong past the duration limit, Unsupported for still images and
    other non-video inputs, Unreadable for everything the decoder rejects.
    A missing or undecodable audio stream is not an error; the bundle just
    carries audio_path=None and downstream stages degrade.
    """
    work = Path(work_dir)
    work.mkdir(parents=True, exist_ok=True)
    path = resolve_source(source, config, work)
    meta = probe(path, config)
    duration_s = float(meta["duration_s"])
    if duration_s > MAX_DURATION_S:
        raise TooLong(duration_s)

    timestamps = sample_timestamps(duration_s, config.frame_sample_rate_hz, config.max_frames)
    frames_dir = work / "frames"
    proc = _run_decoder(
        config,
        [
            "frames",
            str(path),
            "--timestamps",
            ",".join(f"{t:.6f}" for t in timestamps),
            "--out-dir",
            str(frames_dir),
        ],
    )
    if proc.returncode != 0:
        raise Unreadable(proc.stderr.strip() or f"decoder exit {proc.returncode}")
    manifest = json.loads(proc.stdout)["frames"]
    frames = []
    for k, entry in enumerate(manifest):
        data = (frames_dir / entry["file"]).read_bytes()
        frames.append(
            FrameSample(
                index=k,
                timestamp_s=float(entry["timestamp_s"]),
                image_bytes=data,
                width=int(entry["width"]),
                height=int(entry["height"]),
            )
        )

    audio_path: str | None = None
    if meta.get("has_audio"):
        wav = work / "audio.wav"
        proc = _run_decoder(config, ["audio", str(path), "--out", str(wav)])
        if proc.returncode == 0:
            audio_path = str(wav)
        elif proc.returncode not in (5, 6):
            raise Unreadable(proc.stderr.strip() or f"decoder exit {proc.returncode}")

    video = VideoItem(
        id=video_id_for_file(path),
        source=source,
        duration_s=duration_s,
        language_hint=language_hint,
        title=title,
        description=description,
    )
    return MediaBundle(video=video, frames=tuple(frames), audio_path=audio_path)
