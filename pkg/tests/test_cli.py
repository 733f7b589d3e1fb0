"""Command-line behavior: exit codes, output formats, fixture mode."""

import json
from pathlib import Path

import pytest

from vidtriage import cli

LEXICON = Path(__file__).resolve().parents[1] / "src" / "vidtriage" / "data" / "lexicons" / "sample_en.jsonl"


def _run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _fixture_args(fixture_dir, tmp_path):
    return ["--fixture-mode", "--fixtures", str(fixture_dir), "--store", str(tmp_path / "store")]


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["no-such-command"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        cli.main(["--disable", "bogus", "analyze", "x.avi"])
    assert err.value.code == 2
    assert "unknown module" in capsys.readouterr().err


def test_analyze_text_output(capsys, fixture_dir, demo_video, tmp_path):
    code, out, _ = _run(capsys, _fixture_args(fixture_dir, tmp_path) + ["analyze", str(demo_video)])
    assert code == 0
    assert out.startswith("video: ")
    assert "label: Checkworthy" in out
    assert "score: 3 (threshold 2)" in out


def test_analyze_csv_output(capsys, fixture_dir, demo_video, tmp_path):
    code, out, _ = _run(
        capsys,
        _fixture_args(fixture_dir, tmp_path) + ["--output", "csv", "analyze", str(demo_video)],
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "field,value"
    assert "label,Checkworthy" in lines
    assert "score,3" in lines


def test_analyze_without_recordings_exits_1(capsys, demo_video, tmp_path):
    empty = tmp_path / "no-fixtures"
    empty.mkdir()
    code, _, err = _run(
        capsys,
        ["--fixture-mode", "--fixtures", str(empty), "--store", str(tmp_path / "s"), "analyze", str(demo_video)],
    )
    assert code == 1
    assert "fixtures build" in err


def test_eval_text_report_and_stored_report(capsys, fixture_dir, tmp_path):
    code, out, err = _run(
        capsys,
        _fixture_args(fixture_dir, tmp_path) + ["eval", str(fixture_dir / "synth20.jsonl")],
    )
    assert code == 0
    assert "records: 20" in out
    assert "accuracy: 0.800" in out
    assert err.startswith("report: ")
    reports = list((tmp_path / "store" / "eval_reports").glob("*.json"))
    assert len(reports) == 1


def test_eval_no_store_report(capsys, fixture_dir, tmp_path):
    code, _, err = _run(
        capsys,
        _fixture_args(fixture_dir, tmp_path)
        + ["eval", str(fixture_dir / "synth20.jsonl"), "--no-store-report"],
    )
    assert code == 0
    assert "report:" not in err
    assert not (tmp_path / "store" / "eval_reports").exists()


def test_eval_csv_output(capsys, fixture_dir, tmp_path):
    code, out, _ = _run(
        capsys,
        _fixture_args(fixture_dir, tmp_path)
        + ["--output", "csv", "eval", str(fixture_dir / "synth20.jsonl"), "--no-store-report"],
    )
    assert code == 0
    assert out.splitlines()[0] == "section,label,precision,recall,f1,support"


def test_eval_skip_budget(capsys, fixture_dir, tmp_path):
    dataset = tmp_path / "mixed.jsonl"
    rows = [
        {
            "video_id": "good",
            "gold_label": "Checkworthy",
            "signals": {
                "transcript": "t",
                "transcript_verdict": "hostile",
                "summary_verdict": "contentious_issue",
            },
        },
        {"video_id": "bad", "gold_label": "Checkworthy", "media_path": str(tmp_path / "missing.avi")},
    ]
    dataset.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")

    args = _fixture_args(fixture_dir, tmp_path) + ["eval", str(dataset), "--no-store-report"]
    code, _, err = _run(capsys, args)
    assert code == 1
    assert "over the allowed fraction" in err

    code, out, _ = _run(capsys, args + ["--max-skip-frac", "0.9"])
    assert code == 0
    assert "skipped: 1" in out


def test_eval_bad_dataset_exits_1(capsys, fixture_dir, tmp_path):
    dataset = tmp_path / "bad.jsonl"
    dataset.write_text('{"video_id": "x"}\n', encoding="utf-8")
    code, _, err = _run(
        capsys, _fixture_args(fixture_dir, tmp_path) + ["eval", str(dataset)]
    )
    assert code == 1
    assert err.startswith("error: ")
    assert ":1:" in err


def test_ablate_text_output(capsys, fixture_dir, tmp_path):
    code, out, _ = _run(
        capsys,
        _fixture_args(fixture_dir, tmp_path) + ["ablate", str(fixture_dir / "buzzsep.jsonl")],
    )
    assert code == 0
    assert "baseline" in out
    assert "-buzzword" in out


def test_ablate_csv_output(capsys, fixture_dir, tmp_path):
    code, out, _ = _run(
        capsys,
        _fixture_args(fixture_dir, tmp_path) + ["--output", "csv", "ablate", str(fixture_dir / "synth20.jsonl")],
    )
    assert code == 0
    assert out.splitlines()[0].startswith("module,")


def test_deepfake_bench_fixture_mode(capsys, fixture_dir, tmp_path):
    code, out, _ = _run(
        capsys,
        _fixture_args(fixture_dir, tmp_path)
        + ["deepfake-bench", str(fixture_dir / "deepfake_frames.jsonl")],
    )
    assert code == 0
    assert "recorded" in out
    assert "1.000" in out


def test_deepfake_bench_rejects_bad_backend_spec(fixture_dir, tmp_path):
    with pytest.raises(SystemExit) as err:
        cli.main(
            _fixture_args(fixture_dir, tmp_path)
            + ["deepfake-bench", str(fixture_dir / "deepfake_frames.jsonl"), "--backend", "nourl"]
        )
    assert "NAME=URL" in str(err.value)


def test_lexicon_validate_ok(capsys):
    code, out, _ = _run(capsys, ["lexicon", "validate", str(LEXICON)])
    assert code == 0
    assert out.strip().endswith("ok")


def test_lexicon_validate_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"language": "en"}\n{"term": ""}\n', encoding="utf-8")
    code, _, err = _run(capsys, ["lexicon", "validate", str(bad)])
    assert code == 1
    assert "empty term" in err


def test_fixtures_build_writes_the_offline_set(capsys, tmp_path):
    out_dir = tmp_path / "fx"
    code, out, _ = _run(
        capsys, ["--store", str(tmp_path / "store"), "fixtures", "build", "--out", str(out_dir)]
    )
    assert code == 0
    for name in ("beirut.avi", "backends.json", "synth20.jsonl", "buzzsep.jsonl", "deepfake_frames.jsonl"):
        assert (out_dir / name).is_file(), name
