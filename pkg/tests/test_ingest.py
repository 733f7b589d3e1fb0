"""Frame sampling grid, source resolution, and end-to-end ingestion."""

import dataclasses

import pytest
from hypothesis import given, strategies as st

from vidtriage import ingest
from vidtriage.config import PipelineConfig


def test_natural_grid_below_cap():
    assert ingest.sample_timestamps(10.0, 1.0, 100) == [float(k) for k in range(10)]


def test_respaced_grid_at_cap():
    assert ingest.sample_timestamps(10.0, 1.0, 5) == [0.0, 2.25, 4.5, 6.75, 9.0]


def test_short_clip_yields_single_instant():
    assert ingest.sample_timestamps(0.5, 1.0, 100) == [0.0]


def test_cap_of_one_keeps_the_opening_frame():
    assert ingest.sample_timestamps(100.0, 1.0, 1) == [0.0]


def test_grid_end_is_half_open():
    # exactly 4 seconds at 1 Hz: instants 0..3, not 0..4
    assert ingest.sample_timestamps(4.0, 1.0, 100) == [0.0, 1.0, 2.0, 3.0]


@pytest.mark.parametrize("bad", [(0, 1, 1), (1, 0, 1), (1, 1, 0)])
def test_sample_timestamps_rejects_non_positive(bad):
    with pytest.raises(ValueError):
        ingest.sample_timestamps(*bad)


@given(
    duration=st.floats(0.05, 3600.0),
    rate=st.floats(0.05, 30.0),
    cap=st.integers(1, 200),
)
def test_sampling_invariants(duration, rate, cap):
    points = ingest.sample_timestamps(duration, rate, cap)
    assert 1 <= len(points) <= cap
    assert points[0] == 0.0
    assert all(0.0 <= t < duration for t in points)
    assert all(a < b for a, b in zip(points, points[1:]))


def test_video_id_is_content_hash(tmp_path):
    a = tmp_path / "a.bin"
    b = tmp_path / "b.bin"
    a.write_bytes(b"same bytes")
    b.write_bytes(b"same bytes")
    assert ingest.video_id_for_file(a) == ingest.video_id_for_file(b)
    assert len(ingest.video_id_for_file(a)) == 16
    b.write_bytes(b"other bytes")
    assert ingest.video_id_for_file(a) != ingest.video_id_for_file(b)


def test_resolve_local_missing_file(tmp_path):
    with pytest.raises(ingest.Unreadable):
        ingest.resolve_source(str(tmp_path / "nope.avi"), PipelineConfig(), tmp_path)


def test_resolve_url_without_resolver(tmp_path):
    with pytest.raises(ingest.Unreadable):
        ingest.resolve_source("https://example.test/v.avi", PipelineConfig(), tmp_path)


def test_resolve_url_via_resolver_cmd(tmp_path, demo_video):
    # resolver argv is <cmd...> <url> <target>; stand in with a shell copy
    cfg = dataclasses.replace(
        PipelineConfig(), resolver_cmd=("sh", "-c", f'cp "{demo_video}" "$2"', "fetch")
    )
    got = ingest.resolve_source("https://example.test/v.avi", cfg, tmp_path)
    assert got.read_bytes() == demo_video.read_bytes()


def test_probe_unsupported_for_still_image(tmp_path):
    import cv2
    import numpy as np

    path = tmp_path / "still.png"
    ok, buf = cv2.imencode(".png", np.zeros((8, 8, 3), dtype=np.uint8))
    assert ok
    path.write_bytes(buf.tobytes())
    with pytest.raises(ingest.Unsupported):
        ingest.probe(path, PipelineConfig())


def test_ingest_end_to_end(tmp_path, demo_video):
    cfg = PipelineConfig()
    bundle = ingest.ingest(str(demo_video), cfg, tmp_path / "work")
    assert bundle.video.id == ingest.video_id_for_file(demo_video)
    assert bundle.audio_path is not None
    assert 1 <= len(bundle.frames) <= cfg.max_frames
    expect = ingest.sample_timestamps(
        bundle.video.duration_s, cfg.frame_sample_rate_hz, cfg.max_frames
    )
    assert [f.timestamp_s for f in bundle.frames] == pytest.approx(expect)
    assert all(f.image_bytes.startswith(b"\x89PNG") for f in bundle.frames)


def test_ingest_rejects_overlong_video(tmp_path, monkeypatch):
    monkeypatch.setattr(
        ingest,
        "probe",
        lambda path, config: {"duration_s": 601.0, "fps": 30.0, "has_audio": False},
    )
    target = tmp_path / "long.avi"
    target.write_bytes(b"stub")
    with pytest.raises(ingest.TooLong) as err:
        ingest.ingest(str(target), PipelineConfig(), tmp_path / "work")
    assert err.value.duration_s == 601.0
    assert err.value.limit_s == 600.0
