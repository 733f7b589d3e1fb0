"""Builtin media decoder tool.

Invoked as a subprocess (``python -m vidtriage.decoder``) behind a pinned
CLI contract, so deployments can swap in any decoder that honors the same
flags and exit codes (an ffmpeg wrapper, typically) without touching the
pipeline. Video decoding is delegated to OpenCV; audio extraction is
supported for PCM-in-AVI via the in-repo demuxer.

Contract:

    probe  <input>                               -> metadata JSON on stdout
    frames <input> --timestamps T1,T2,... --out-dir DIR
                                                 -> PNG per timestamp + manifest JSON
    audio  <input> --out FILE.wav [--rate HZ]    -> mono PCM16 WAV at HZ (default 16000)

Exit codes: 0 ok, 2 usage, 3 unreadable input, 4 not a video,
5 no audio stream, 6 audio format unsupported.
"""

from __future__ import annotations

import argparse
import json
import sys
import wave
from pathlib import Path

import cv2
import numpy as np

from . import avi

EXIT_UNREADABLE = 3
EXIT_NOT_VIDEO = 4
EXIT_NO_AUDIO = 5
EXIT_BAD_AUDIO = 6


class DecodeFailure(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _open(path: str) -> cv2.VideoCapture:
    if not Path(path).is_file():
        raise DecodeFailure(f"{path}: no such file", EXIT_UNREADABLE)
    cap = cv2.VideoCapture(path)
    if not cap.isOpened():
        raise DecodeFailure(f"{path}: cannot decode", EXIT_UNREADABLE)
    return cap


def probe_file(path: str) -> dict:
    cap = _open(path)
    try:
        fps = cap.get(cv2.CAP_PROP_FPS)
        frame_count = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
        width = int(cap.get(cv2.CAP_PROP_FRAME_WIDTH))
        height = int(cap.get(cv2.CAP_PROP_FRAME_HEIGHT))
    finally:
        cap.release()
    if fps <= 0 or frame_count <= 1:
        raise DecodeFailure(f"{path}: not a video (still image or empty)", EXIT_NOT_VIDEO)
    has_audio = False
    try:
        avi.read_pcm_audio(path)
        has_audio = True
    except (avi.NotAvi, avi.NoAudioStream):
        pass
    except avi.UnsupportedAudio:
        has_audio = True  # stream exists, we just cannot decode it
    return {
        "duration_s": frame_count / fps,
        "fps": fps,
        "frame_count": frame_count,
        "width": width,
        "height": height,
        "has_audio": has_audio,
    }


def extract_frames(path: str, timestamps: list[float], out_dir: str) -> dict:
    meta = probe_file(path)
    fps = meta["fps"]
    frame_count = meta["frame_count"]
    # Requested timestamp -> source frame index, clamped to the stream.
    targets = [min(max(int(round(t * fps)), 0), frame_count - 1) for t in timestamps]
    needed = set(targets)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cap = _open(path)
    encoded: dict[int, bytes] = {}
    try:
        idx = 0
        while idx <= max(needed):
            ok, frame = cap.read()
            if not ok:
                break
            if idx in needed:
                ok, buf = cv2.imencode(".png", frame)
                if not ok:
                    raise DecodeFailure(f"{path}: PNG encode failed at frame {idx}", EXIT_UNREADABLE)
                encoded[idx] = buf.tobytes()
            idx += 1
    finally:
        cap.release()

    manifest = []
    for k, (t, src_idx) in enumerate(zip(timestamps, targets)):
        data = encoded.get(src_idx)
        if data is None:
            raise DecodeFailure(f"{path}: frame {src_idx} missing from stream", EXIT_UNREADABLE)
        name = f"frame_{k:05d}.png"
        (out / name).write_bytes(data)
        manifest.append(
            {
                "file": name,
                "timestamp_s": t,
                "source_frame": src_idx,
                "width": meta["width"],
                "height": meta["height"],
            }
        )
    return {"frames": manifest}


def _resample_mono(samples: np.ndarray, src_rate: int, dst_rate: int) -> np.ndarray:
    if src_rate == dst_rate or samples.size == 0:
        return samples
    n_out = max(int(round(samples.size * dst_rate / src_rate)), 1)
    x_src = np.arange(samples.size, dtype=np.float64) / src_rate
    x_dst = np.arange(n_out, dtype=np.float64) / dst_rate
    return np.interp(x_dst, x_src, samples)


def extract_audio(path: str, out_path: str, rate: int = 16_000) -> dict:
    try:
        pcm = avi.read_pcm_audio(path)
    except avi.NotAvi:
        # Builtin decoder only demuxes AVI audio; other containers need an
        # external decoder honoring this contract.
        raise DecodeFailure(f"{path}: builtin decoder cannot demux audio from this container", EXIT_BAD_AUDIO)
    except avi.NoAudioStream:
        raise DecodeFailure(f"{path}: no audio stream", EXIT_NO_AUDIO)
    except avi.UnsupportedAudio as exc:
        raise DecodeFailure(str(exc), EXIT_BAD_AUDIO)

    if pcm.bits == 16:
        samples = np.frombuffer(pcm.data, dtype="<i2").astype(np.float64)
    else:  # 8-bit PCM is unsigned
        samples = (np.frombuffer(pcm.data, dtype=np.uint8).astype(np.float64) - 128.0) * 256.0
    if pcm.channels > 1:
        usable = samples.size - samples.size % pcm.channels
        samples = samples[:usable].reshape(-1, pcm.channels).mean(axis=1)
    samples = _resample_mono(samples, pcm.sample_rate, rate)
    data = np.clip(samples, -32768, 32767).astype("<i2").tobytes()

    with wave.open(out_path, "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(rate)
        wav.writeframes(data)
    return {"file": out_path, "sample_rate": rate, "n_samples": len(data) // 2}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="vidtriage.decoder", description=__doc__)
    sub = parser.add_subparsers(dest="op", required=True)

    p = sub.add_parser("probe")
    p.add_argument("input")

    p = sub.add_parser("frames")
    p.add_argument("input")
    p.add_argument("--timestamps", required=True, help="comma-separated seconds")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("audio")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--rate", type=int, default=16_000)

    args = parser.parse_args(argv)
    try:
        if args.op == "probe":
            result = probe_file(args.input)
        elif args.op == "frames":
            timestamps = [float(t) for t in args.timestamps.split(",") if t]
            result = extract_frames(args.input, timestamps, args.out_dir)
        else:
            result = extract_audio(args.input, args.out, args.rate)
    except DecodeFailure as exc:
        print(str(exc), file=sys.stderr)
        return exc.exit_code
    json.dump(result, sys.stdout)
    print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
