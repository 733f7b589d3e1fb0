"""Rule-based aggregation of modality signals into a labeled score.

Pure functions throughout. Every point of the score is accounted for by a
ledger entry, disabled modules are listed explicitly, and an advertisement
override forces Not_Checkworthy while still reporting the full score, so a
reviewer always sees what would have happened without the override.
"""

from __future__ import annotations

from dataclasses import replace

from .config import KNOWN_MODULES, PipelineConfig
from .model import (
    CheckworthinessResult,
    Contribution,
    Label,
    ModalitySignals,
    SemanticClass,
    Stance,
)

# Verdicts that make a modality count toward the score. promotional and
# benign deliberately contribute nothing; ads are handled by the override.
FIRING_VERDICTS = frozenset(
    {SemanticClass.political, SemanticClass.hostile, SemanticClass.contentious_issue}
)

# Which signal fields each module feeds. Disabling a module is, by
# definition, zeroing these before scoring; the ablation runner leans on
# that equivalence.
_MODULE_FIELDS: dict[str, dict] = {
    "transcription": {
        "transcript": None,
        "transcript_lang": None,
        "transcript_verdict": SemanticClass.unknown,
    },
    "ocr": {"overlay_text": None, "overlay_verdict": SemanticClass.unknown},
    "video_summary": {"video_summary": None, "summary_verdict": SemanticClass.unknown},
    "buzzword": {"buzzword_hits": ()},
    "fact_check": {"claim_results": ()},
    "deepfake": {"deepfake_score": None},
    "weapon": {"weapon_detected": False},
    "ad_filter": {"is_advertisement": False},
}


def strip_module(signals: ModalitySignals, module: str) -> ModalitySignals:
    """Signals as they would look had the module never run."""
    fields = _MODULE_FIELDS.get(module)
    if fields is None:
        raise ValueError(f"unknown module {module!r}")
    changes = dict(fields)
    if module in ("transcription", "ocr"):
        # Hits found in text the removed module produced go with it.
        source = "transcript" if module == "transcription" else "overlay"
        changes["buzzword_hits"] = tuple(
            h for h in signals.buzzword_hits if h.source.value != source
        )
    return replace(signals, **changes)


def effective_signals(signals: ModalitySignals, config: PipelineConfig) -> ModalitySignals:
    for module in KNOWN_MODULES:
        if not config.enabled(module):
            signals = strip_module(signals, module)
    return signals


def _fired(signals: ModalitySignals, config: PipelineConfig) -> list[Contribution]:
    out: list[Contribution] = []

    def add(signal: str, rationale: str) -> None:
        out.append(Contribution(signal=signal, weight=config.weight(signal), rationale=rationale))

    for signal, verdict in (
        ("verdict.transcript", signals.transcript_verdict),
        ("verdict.summary", signals.summary_verdict),
        ("verdict.overlay", signals.overlay_verdict),
    ):
        if verdict in FIRING_VERDICTS:
            modality = signal.split(".", 1)[1]
            add(signal, f"{modality} verdict is {verdict.value}")

    n_hits = len(signals.buzzword_hits)
    if n_hits:
        terms = ", ".join(sorted({h.term for h in signals.buzzword_hits})[:3])
        add("buzzword", f"{n_hits} lexicon hit{'s' if n_hits != 1 else ''} ({terms})")

    n_bad = sum(1 for c in signals.claim_results if c.stance in (Stance.refuted, Stance.disputed))
    if n_bad:
        add("claim.refuted", f"{n_bad} of {len(signals.claim_results)} claims refuted or disputed")
    elif signals.claim_results:
        add("claim.present", f"{len(signals.claim_results)} claims detected, none refuted")

    if signals.deepfake_score is not None and signals.deepfake_score >= config.deepfake_trigger:
        add(
            "deepfake",
            f"deepfake score {signals.deepfake_score:.3f} at or above trigger {config.deepfake_trigger:.3f}",
        )

    if signals.weapon_detected:
        add("weapon", "weapon detected in sampled frames")

    return out


def score(signals: ModalitySignals, config: PipelineConfig) -> CheckworthinessResult:
    """Score one signal set under one config. Total: never raises."""
    stripped = effective_signals(signals, config)
    contributions = _fired(stripped, config)
    total = sum(c.weight for c in contributions)

    ad_override = stripped.is_advertisement and config.enabled("ad_filter")
    if ad_override:
        contributions.append(
            Contribution(
                signal="ad_override",
                weight=0.0,
                rationale="advertisement detected, label forced to Not_Checkworthy",
            )
        )
    for module in KNOWN_MODULES:
        if not config.enabled(module):
            contributions.append(
                Contribution(signal=module, weight=0.0, rationale="module disabled")
            )

    if ad_override:
        label = Label.not_checkworthy
    else:
        label = Label.checkworthy if total >= config.threshold else Label.not_checkworthy
    return CheckworthinessResult(
        label=label,
        score=total,
        threshold=config.threshold,
        contributions=tuple(contributions),
        ad_override=ad_override,
    )


def explain(result: CheckworthinessResult) -> str:
    """Deterministic human-readable report for one result."""
    lines: list[str] = []
    if result.ad_override:
        lines.append("advertisement override: labeled Not_Checkworthy regardless of score")
    lines.append(f"label: {result.label.value}")
    lines.append(f"score: {result.score:g} (threshold {result.threshold:g})")
    fired = [c for c in result.contributions if c.rationale != "module disabled" and c.signal != "ad_override"]
    disabled = [c.signal for c in result.contributions if c.rationale == "module disabled"]
    if fired:
        lines.append("contributions:")
        for c in fired:
            lines.append(f"  {c.weight:+g}  {c.signal}  {c.rationale}")
    else:
        lines.append("no signals fired")
    if disabled:
        lines.append("disabled modules: " + ", ".join(disabled))
    return "\n".join(lines)
