"""Command-line interface.

Exit codes: 0 success, 1 run failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from . import buzzwords, evaluation, fixtures, pipeline
from .backends.clients import AnalysisBackends, HttpTransport, ReplayTransport
from .backends.envelope import BackendUnavailable
from .config import KNOWN_MODULES, PipelineConfig, load_config, validate
from .ingest import IngestError
from .store import Store

log = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vidtriage",
        description="Triage short-form videos for checkworthiness.",
    )
    parser.add_argument("--config", metavar="PATH", help="JSON config file")
    parser.add_argument(
        "--fixture-mode",
        action="store_true",
        help="replay recorded backend responses instead of calling live services",
    )
    parser.add_argument(
        "--fixtures",
        metavar="DIR",
        default="fixtures",
        help="fixture directory holding backends.json (default: fixtures)",
    )
    parser.add_argument(
        "--disable",
        action="append",
        default=[],
        metavar="MODULE",
        help=f"disable a module (repeatable; one of: {', '.join(KNOWN_MODULES)})",
    )
    parser.add_argument("--output", choices=["text", "csv"], default="text")
    parser.add_argument("--store", metavar="DIR", help="override the result store directory")

    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("analyze", help="analyze one video file or URL")
    p.add_argument("source")
    p.add_argument("--language-hint", metavar="TAG")

    p = sub.add_parser("eval", help="evaluate a labeled dataset")
    p.add_argument("dataset")
    p.add_argument(
        "--max-skip-frac",
        type=float,
        default=0.0,
        metavar="FRAC",
        help="fail (exit 1) when more than this fraction of records is skipped",
    )
    p.add_argument("--no-store-report", action="store_true", help="do not persist the report")

    p = sub.add_parser("ablate", help="metric deltas from removing each module")
    p.add_argument("dataset")

    p = sub.add_parser("deepfake-bench", help="compare deepfake scoring backends")
    p.add_argument("dataset")
    p.add_argument(
        "--backend",
        action="append",
        default=[],
        metavar="NAME=URL",
        help="backend to bench (repeatable; default: the configured deepfake endpoint)",
    )

    p = sub.add_parser("lexicon", help="lexicon file tools")
    lex_sub = p.add_subparsers(dest="lexicon_cmd", required=True)
    v = lex_sub.add_parser("validate", help="check a lexicon file")
    v.add_argument("file")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8600)
    p.add_argument("--ui-dir", metavar="DIR", help="static UI assets to mount at /ui")

    p = sub.add_parser("fixtures", help="fixture tools")
    fix_sub = p.add_subparsers(dest="fixtures_cmd", required=True)
    b = fix_sub.add_parser("build", help="generate the offline fixture set")
    b.add_argument("--out", metavar="DIR", default="fixtures")

    return parser


def _load_config(args, parser: argparse.ArgumentParser) -> PipelineConfig:
    for module in args.disable:
        if module not in KNOWN_MODULES:
            parser.error(f"--disable {module}: unknown module (known: {', '.join(KNOWN_MODULES)})")
    config = load_config(args.config) if args.config else PipelineConfig()
    if args.disable:
        config = config.with_disabled(*args.disable)
    if args.store:
        config = replace(config, store_dir=args.store)
    problems = validate(config)
    if problems:
        raise SystemExit("invalid config:\n  " + "\n  ".join(problems))
    return config


def _transport(args, config: PipelineConfig):
    if args.fixture_mode:
        recordings = Path(args.fixtures) / "backends.json"
        if not recordings.is_file():
            raise FileNotFoundError(
                f"{recordings}: no recorded responses (run 'vidtriage fixtures build' first)"
            )
        return ReplayTransport.load(recordings)
    return HttpTransport(config)


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _cmd_analyze(args, config: PipelineConfig) -> int:
    backends = AnalysisBackends(config, transport=_transport(args, config))
    try:
        record = pipeline.analyze(
            args.source,
            config,
            backends,
            store=Store(config.store_dir),
            language_hint=args.language_hint,
        )
    finally:
        backends.close()
    if args.output == "csv":
        rows = ["field,value"]
        rows.append(f"video_id,{record.video_id}")
        rows.append(f"label,{record.result.label.value}")
        rows.append(f"score,{record.result.score:g}")
        rows.append(f"threshold,{record.result.threshold:g}")
        rows.append(f"ad_override,{record.result.ad_override}")
        for c in record.result.contributions:
            rows.append(f"contribution.{c.signal},{c.weight:g}")
        print("\n".join(rows))
    else:
        print(f"video: {record.video_id}")
        print(pipeline.render_analysis(record))
    return 0


def _cmd_eval(args, config: PipelineConfig) -> int:
    records = evaluation.load_dataset(args.dataset)
    report = evaluation.run_eval(records, config, analyze_media=_media_analyzer(args, config))
    if not args.no_store_report:
        rid = evaluation.report_id(report)
        Store(config.store_dir).save_report(report, created_at=_now())
        print(f"report: {rid}", file=sys.stderr)
    print(evaluation.report_to_csv(report) if args.output == "csv" else evaluation.report_to_text(report))
    total = report.n + len(report.skipped)
    if total and len(report.skipped) / total > args.max_skip_frac:
        print(f"skipped {len(report.skipped)}/{total} records, over the allowed fraction", file=sys.stderr)
        return 1
    return 0


def _media_analyzer(args, config: PipelineConfig):
    """Analyzer for datasets with media paths; built lazily so signal-only
    datasets never touch backends."""
    state: dict = {}

    def analyze_media(path: str, cfg: PipelineConfig):
        if "backends" not in state:
            state["backends"] = AnalysisBackends(cfg, transport=_transport(args, cfg))
        return pipeline.analyze(path, cfg, state["backends"], store=Store(cfg.store_dir))

    return analyze_media


def _cmd_ablate(args, config: PipelineConfig) -> int:
    records = evaluation.load_dataset(args.dataset)
    table = evaluation.run_ablation(records, config, analyze_media=_media_analyzer(args, config))
    print(evaluation.ablation_to_csv(table) if args.output == "csv" else evaluation.ablation_to_text(table))
    return 0


def _cmd_deepfake_bench(args, config: PipelineConfig) -> int:
    records = evaluation.load_frame_dataset(args.dataset)
    backends = None
    if args.backend:
        backends = {}
        for spec_arg in args.backend:
            name, sep, url = spec_arg.partition("=")
            if not sep or not name or not url:
                raise SystemExit(f"--backend {spec_arg}: expected NAME=URL")
            backends[name] = url
    factory = None
    if args.fixture_mode:
        replay = _transport(args, config)
        factory = lambda name, url: replay
        if backends is None:
            backends = {"recorded": ""}
    rows = evaluation.compare_deepfake_backends(records, config, backends, transport_factory=factory)
    print(
        evaluation.deepfake_bench_to_csv(rows)
        if args.output == "csv"
        else evaluation.deepfake_bench_to_text(rows)
    )
    return 0 if any(row.error is None for row in rows) else 1


def _cmd_lexicon_validate(args) -> int:
    problems = buzzwords.validate_file(args.file)
    if problems:
        for problem in problems:
            print(problem, file=sys.stderr)
        return 1
    print(f"{args.file}: ok")
    return 0


def _cmd_serve(args, config: PipelineConfig) -> int:
    import uvicorn

    from .server import create_app

    factory = None
    if args.fixture_mode:
        replay = _transport(args, config)
        factory = lambda: replay
    app = create_app(config, transport_factory=factory, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_fixtures_build(args, config: PipelineConfig) -> int:
    paths = fixtures.build_all(args.out, config)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args, parser)
        if args.cmd == "analyze":
            return _cmd_analyze(args, config)
        if args.cmd == "eval":
            return _cmd_eval(args, config)
        if args.cmd == "ablate":
            return _cmd_ablate(args, config)
        if args.cmd == "deepfake-bench":
            return _cmd_deepfake_bench(args, config)
        if args.cmd == "lexicon":
            return _cmd_lexicon_validate(args)
        if args.cmd == "serve":
            return _cmd_serve(args, config)
        if args.cmd == "fixtures":
            return _cmd_fixtures_build(args, config)
        parser.error(f"unknown command {args.cmd}")
    except SystemExit:
        raise
    except (
        IngestError,
        BackendUnavailable,
        buzzwords.BadLexicon,
        evaluation.Empty,
        evaluation.LengthMismatch,
        evaluation.UnknownModule,
        FileNotFoundError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
