"""Lexicon-based detection of ideological buzzwords and coded language.

Matching happens on a normalized view of the text (Unicode NFKC, case
folded, whitespace runs collapsed) while reported spans point into the
original string. Word and phrase terms only match between Unicode word
boundaries, so "stem" never fires inside "bestemme"; regex-lite entries
bring their own boundaries.

Lexicon files are JSON lines: a header object ``{"language": ...}`` then
one entry object per line (see docs/lexicons.md). Curated production term
lists are user-supplied data; the package ships only a small sample.
"""

from __future__ import annotations

import json
import re
import unicodedata
from importlib import resources
from pathlib import Path

from .model import BuzzwordHit, HitSource, Lexicon, LexiconEntry

MATCH_MODES = ("word", "phrase", "regex-lite")


class BadLexicon(Exception):
    """A lexicon file failed to load or validate."""


def _is_word_char(ch: str) -> bool:
    return ch == "_" or unicodedata.category(ch)[0] in ("L", "N")


def _normalize_mapped(text: str) -> tuple[str, list[int]]:
    """Normalized text plus a map from each normalized char to the index
    of the original char it came from.

    NFKC is applied per character so the offset map stays exact; the few
    multi-character compositions NFKC can perform are not worth losing
    span fidelity over.
    """
    chars: list[str] = []
    offsets: list[int] = []
    for i, ch in enumerate(text):
        for c in unicodedata.normalize("NFKC", ch).casefold():
            chars.append(c)
            offsets.append(i)
    out: list[str] = []
    omap: list[int] = []
    prev_space = False
    for c, o in zip(chars, offsets):
        if c.isspace():
            if not prev_space:
                out.append(" ")
                omap.append(o)
            prev_space = True
        else:
            out.append(c)
            omap.append(o)
            prev_space = False
    return "".join(out), omap


def normalize(text: str) -> str:
    """NFKC, case-folded, whitespace-collapsed text. Idempotent."""
    return _normalize_mapped(text)[0]


def _boundary_ok(haystack: str, start: int, end: int) -> bool:
    if start > 0 and _is_word_char(haystack[start - 1]):
        return False
    if end < len(haystack) and _is_word_char(haystack[end]):
        return False
    return True


def _original_span(omap: list[int], text: str, start: int, end: int) -> tuple[int, int]:
    orig_start = omap[start]
    last = omap[end - 1]
    # The last normalized char may come from a multi-char original run;
    # the span closes after that original character.
    return orig_start, last + 1


def _entry_problems(entry: LexiconEntry) -> list[str]:
    problems = []
    if not entry.term.strip():
        problems.append("empty term")
    if entry.match_mode not in MATCH_MODES:
        problems.append(f"unknown match_mode {entry.match_mode!r}")
    if entry.match_mode == "word" and " " in normalize(entry.term).strip():
        problems.append("word-mode term contains whitespace (use phrase mode)")
    if entry.match_mode == "regex-lite":
        try:
            compiled = re.compile(entry.term)
        except re.error as exc:
            problems.append(f"bad pattern: {exc}")
        else:
            if compiled.match(""):
                problems.append("pattern may match the empty string")
    return problems


def validate_file(path: str | Path) -> list[str]:
    """All problems in a lexicon file, empty list when it is clean."""
    path = Path(path)
    problems: list[str] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        return [f"{path}: {exc}"]
    if not lines:
        return [f"{path}: empty file, expected a language header line"]
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        return [f"{path}:1: not JSON: {exc}"]
    if not isinstance(header, dict) or not isinstance(header.get("language"), str):
        problems.append(f"{path}:1: header must be an object with a 'language' string")
    seen: set[str] = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            problems.append(f"{path}:{lineno}: not JSON: {exc}")
            continue
        if not isinstance(obj, dict) or not isinstance(obj.get("term"), str):
            problems.append(f"{path}:{lineno}: entry must be an object with a 'term' string")
            continue
        entry = LexiconEntry(
            term=obj["term"],
            match_mode=str(obj.get("match_mode", "word")),
            note=str(obj.get("note", "")),
        )
        for problem in _entry_problems(entry):
            problems.append(f"{path}:{lineno}: {problem}")
        key = normalize(entry.term).strip() if entry.match_mode != "regex-lite" else entry.term
        if key in seen:
            problems.append(f"{path}:{lineno}: duplicate term {entry.term!r}")
        seen.add(key)
    return problems


def load_lexicon(path: str | Path) -> Lexicon:
    problems = validate_file(path)
    if problems:
        raise BadLexicon("; ".join(problems))
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    language = json.loads(lines[0])["language"]
    entries = []
    for raw in lines[1:]:
        if not raw.strip():
            continue
        obj = json.loads(raw)
        entries.append(
            LexiconEntry(
                term=obj["term"],
                match_mode=str(obj.get("match_mode", "word")),
                note=str(obj.get("note", "")),
            )
        )
    return Lexicon(language=language, entries=tuple(entries))


def packaged_lexicon_paths() -> list[Path]:
    root = resources.files("vidtriage") / "data" / "lexicons"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".jsonl"))


def load_lexicons(paths: tuple[str, ...] | list[str] = ()) -> list[Lexicon]:
    """Load the given lexicon files, or the packaged samples when none given."""
    actual = [Path(p) for p in paths] if paths else packaged_lexicon_paths()
    return [load_lexicon(p) for p in actual]


def _find_plain(haystack: str, needle: str):
    start = 0
    while True:
        idx = haystack.find(needle, start)
        if idx < 0:
            return
        yield idx, idx + len(needle)
        start = idx + 1


def detect(text: str, source: HitSource, lexicons: list[Lexicon]) -> list[BuzzwordHit]:
    """All lexicon hits in the text, sorted by position, one per (term, span)."""
    if not text:
        return []
    haystack, omap = _normalize_mapped(text)
    found: dict[tuple[str, tuple[int, int]], BuzzwordHit] = {}
    for lexicon in lexicons:
        for entry in lexicon.entries:
            if entry.match_mode == "regex-lite":
                spans = ((m.start(), m.end()) for m in re.finditer(entry.term, haystack) if m.end() > m.start())
            else:
                needle = normalize(entry.term).strip()
                if not needle:
                    continue
                spans = (
                    (s, e) for s, e in _find_plain(haystack, needle) if _boundary_ok(haystack, s, e)
                )
            for s, e in spans:
                span = _original_span(omap, text, s, e)
                key = (entry.term, span)
                if key not in found:
                    found[key] = BuzzwordHit(
                        term=entry.term,
                        surface=text[span[0] : span[1]],
                        source=source,
                        span=span,
                    )
    return sorted(found.values(), key=lambda h: (h.span, h.term))
