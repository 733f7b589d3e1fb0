"""Minimal RIFF/AVI muxing and PCM-audio demuxing.

The builtin decoder handles any container OpenCV can read for frames, but
OpenCV cannot touch audio streams. This module fills that gap for the one
container the project authors itself: AVI with an MJPEG video stream and
an uncompressed PCM16 audio stream. Fixture clips are written with
``write_avi`` and their audio is recovered with ``read_pcm_audio``.

Layout written (and expected back):

    RIFF 'AVI '
      LIST 'hdrl'  avih + one 'vids'/MJPG strl + one 'auds'/PCM strl
      LIST 'movi'  interleaved '00dc' (JPEG) and '01wb' (PCM) chunks
      'idx1'       index entries for every chunk

Chunks are word-aligned per RIFF rules (odd-length payloads get a pad
byte that is not counted in the chunk size).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path


def _chunk(fourcc: bytes, data: bytes) -> bytes:
    pad = b"\x00" if len(data) % 2 else b""
    return fourcc + struct.pack("<I", len(data)) + data + pad


def _list(list_type: bytes, payload: bytes) -> bytes:
    return _chunk(b"LIST", list_type + payload)


def _stream_header(fcc_type: bytes, handler: bytes, scale: int, rate: int, length: int, sample_size: int) -> bytes:
    # AVISTREAMHEADER: flags, priority, language, initial frames, scale,
    # rate, start, length, suggested buffer, quality, sample size, rcFrame.
    return _chunk(
        b"strh",
        fcc_type
        + handler
        + struct.pack("<IHHIIIIIIII4H", 0, 0, 0, 0, scale, rate, 0, length, 0, 0xFFFFFFFF, sample_size, 0, 0, 0, 0),
    )


def write_avi(
    path: str | Path,
    jpeg_frames: list[bytes],
    fps: int,
    width: int,
    height: int,
    pcm_samples: bytes = b"",
    sample_rate: int = 16_000,
) -> None:
    """Write an MJPEG(+PCM16 mono) AVI file.

    ``pcm_samples`` is little-endian signed 16-bit mono audio; pass empty
    bytes for a silent, audio-less container.
    """
    if not jpeg_frames:
        raise ValueError("need at least one frame")
    n = len(jpeg_frames)
    has_audio = len(pcm_samples) > 0

    streams = 2 if has_audio else 1
    avih = struct.pack(
        "<14I", 1_000_000 // fps, 0, 0, 0x10, n, 0, streams, 0, width, height, 0, 0, 0, 0
    )
    strl_v = _list(
        b"strl",
        _stream_header(b"vids", b"MJPG", 1, fps, n, 0)
        + _chunk(b"strf", struct.pack("<IiiHH4sIiiII", 40, width, height, 1, 24, b"MJPG", width * height * 3, 0, 0, 0, 0)),
    )
    hdrl_payload = _chunk(b"avih", avih) + strl_v
    if has_audio:
        n_samples = len(pcm_samples) // 2
        strl_a = _list(
            b"strl",
            _stream_header(b"auds", b"\x01\x00\x00\x00", 1, sample_rate, n_samples, 2)
            + _chunk(b"strf", struct.pack("<HHIIHH", 1, 1, sample_rate, sample_rate * 2, 2, 16)),
        )
        hdrl_payload += strl_a
    hdrl = _list(b"hdrl", hdrl_payload)

    # Interleave one audio slice per video frame so players that ignore
    # idx1 still stream correctly.
    per_frame = (len(pcm_samples) // n) & ~1 if has_audio else 0
    movi_payload = b""
    idx = b""
    offset = 4  # relative to the start of 'movi' list type
    audio_cursor = 0
    for i, jpeg in enumerate(jpeg_frames):
        idx += b"00dc" + struct.pack("<III", 0x10, offset, len(jpeg))
        frame_chunk = _chunk(b"00dc", jpeg)
        movi_payload += frame_chunk
        offset += len(frame_chunk)
        if has_audio:
            hi = len(pcm_samples) if i == n - 1 else audio_cursor + per_frame
            slice_ = pcm_samples[audio_cursor:hi]
            audio_cursor = hi
            idx += b"01wb" + struct.pack("<III", 0x00, offset, len(slice_))
            audio_chunk = _chunk(b"01wb", slice_)
            movi_payload += audio_chunk
            offset += len(audio_chunk)

    body = hdrl + _list(b"movi", movi_payload) + _chunk(b"idx1", idx)
    with open(path, "wb") as fh:
        fh.write(b"RIFF" + struct.pack("<I", len(body) + 4) + b"AVI " + body)


@dataclass(frozen=True)
class PcmAudio:
    sample_rate: int
    channels: int
    bits: int
    data: bytes  # raw interleaved samples


class NotAvi(Exception):
    pass


class NoAudioStream(Exception):
    pass


class UnsupportedAudio(Exception):
    pass


def _iter_chunks(buf: bytes, start: int, end: int):
    pos = start
    while pos + 8 <= end:
        fourcc = buf[pos : pos + 4]
        (size,) = struct.unpack_from("<I", buf, pos + 4)
        data_start = pos + 8
        yield fourcc, data_start, size
        pos = data_start + size + (size & 1)


def read_pcm_audio(path: str | Path) -> PcmAudio:
    """Extract the raw PCM audio stream from an AVI file.

    Raises ``NotAvi`` for non-AVI input, ``NoAudioStream`` when the
    container has no audio, and ``UnsupportedAudio`` for compressed audio
    formats this demuxer does not decode.
    """
    buf = Path(path).read_bytes()
    if len(buf) < 12 or buf[:4] != b"RIFF" or buf[8:12] != b"AVI ":
        raise NotAvi(f"{path}: not a RIFF/AVI file")

    audio_stream_index: int | None = None
    fmt: tuple[int, int, int, int] | None = None  # (tag, channels, rate, bits)

    def walk(start: int, end: int, stream_counter: list[int]) -> None:
        nonlocal audio_stream_index, fmt
        for fourcc, data_start, size in _iter_chunks(buf, start, end):
            if fourcc == b"LIST":
                list_type = buf[data_start : data_start + 4]
                if list_type == b"strl":
                    idx = stream_counter[0]
                    stream_counter[0] += 1
                    stype = None
                    for c4, ds, sz in _iter_chunks(buf, data_start + 4, data_start + size):
                        if c4 == b"strh":
                            stype = buf[ds : ds + 4]
                        elif c4 == b"strf" and stype == b"auds" and audio_stream_index is None:
                            tag, channels = struct.unpack_from("<HH", buf, ds)
                            (rate,) = struct.unpack_from("<I", buf, ds + 4)
                            (bits,) = struct.unpack_from("<H", buf, ds + 14)
                            audio_stream_index = idx
                            fmt = (tag, channels, rate, bits)
                elif list_type in (b"hdrl", b"movi", b"rec "):
                    walk(data_start + 4, data_start + size, stream_counter)

    walk(12, len(buf), [0])
    if audio_stream_index is None or fmt is None:
        raise NoAudioStream(f"{path}: no audio stream")
    tag, channels, rate, bits = fmt
    if tag != 1 or bits not in (8, 16):
        raise UnsupportedAudio(f"{path}: audio format tag={tag} bits={bits} not supported")

    wanted = b"%02d" % audio_stream_index
    pieces: list[bytes] = []

    def collect(start: int, end: int) -> None:
        for fourcc, data_start, size in _iter_chunks(buf, start, end):
            if fourcc == b"LIST":
                collect(data_start + 4, data_start + size)
            elif fourcc[:2] == wanted and fourcc[2:4] in (b"wb", b"tx"):
                pieces.append(buf[data_start : data_start + size])

    collect(12, len(buf))
    return PcmAudio(sample_rate=rate, channels=channels, bits=bits, data=b"".join(pieces))
