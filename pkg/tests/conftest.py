"""Shared fixtures: a session-scoped offline fixture set and per-test configs."""

from __future__ import annotations

import pytest

from vidtriage import fixtures
from vidtriage.backends.clients import ReplayTransport
from vidtriage.config import PipelineConfig


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """Build the full offline fixture set once per session."""
    out = tmp_path_factory.mktemp("fixtures")
    fixtures.build_all(out, PipelineConfig(store_dir=str(out / "build_store")))
    return out


@pytest.fixture(scope="session")
def demo_video(fixture_dir):
    return fixture_dir / "beirut.avi"


@pytest.fixture(scope="session")
def recordings_path(fixture_dir):
    return fixture_dir / "backends.json"


@pytest.fixture
def replay(recordings_path):
    """Fresh replay transport per test so call logs start empty."""
    return ReplayTransport.load(recordings_path)


@pytest.fixture
def config(tmp_path):
    return PipelineConfig(store_dir=str(tmp_path / "store"))


# One verdict line per end-to-end requirement, printed after the run so the
# gate can be read off the terminal without grepping individual tests.

ACCEPTANCE_LABELS = {
    "test_f1_spot_checks": "F1 identity spot checks (tol 0.005, <1s)",
    "test_demo_video_end_to_end": "demo video end-to-end, offline (<5s)",
    "test_decision_engine_properties": "decision engine properties, 10k vectors each (<30s)",
    "test_ablation_mechanics": "ablation mechanics on synthetic sets (<10s)",
    "test_metrics_oracle_equivalence": "metrics equal independent oracle, 1000 datasets (<10s)",
    "test_buzzword_invariances": "buzzword matcher invariances (<5s)",
    "test_cached_reanalysis": "cached re-analysis: no backend calls, identical bytes (<5s)",
    "test_degraded_transcription": "transcription outage degrades, still labels (<5s)",
    "test_deepfake_backend_comparison": "deepfake bench: always-negative backend zeroes (<5s)",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results: dict[str, str] = {}
    for category, verdict in (
        ("failed", "FAIL"),
        ("error", "FAIL"),
        ("skipped", "SKIP"),
        ("passed", "PASS"),
    ):
        for report in terminalreporter.stats.get(category, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" not in nodeid:
                continue
            name = nodeid.split("::")[-1].split("[")[0]
            if name in ACCEPTANCE_LABELS:
                results.setdefault(name, verdict)
    if not results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, label in ACCEPTANCE_LABELS.items():
        if name in results:
            terminalreporter.write_line(f"{results[name]:<4s}  {label}")
