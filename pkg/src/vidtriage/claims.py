"""Claim detection and verification against remote fact-check backends.

Detection finds declarative factual statements worth checking; verification
asks the fact-check service for a stance per claim. A failure verifying one
claim degrades that claim to no_evidence with a warning instead of failing
the batch; only total backend loss raises.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

from .backends.clients import AnalysisBackends
from .model import ClaimCheckResult, Stance

log = logging.getLogger(__name__)


class EmptyInput(Exception):
    """Claim detection needs non-empty text."""


def detect_claims(text: str, backends: AnalysisBackends) -> list[str]:
    """Check-worthy declarative claims found in the text, in order."""
    if not text or not text.strip():
        raise EmptyInput("claim detection needs non-empty text")
    return backends.detect_claims(text)


def verify_claims(
    claims: list[str], backends: AnalysisBackends, max_concurrency: int = 4
) -> list[ClaimCheckResult]:
    """One result per claim, input order preserved.

    A per-claim backend failure yields a no_evidence result carrying a
    warning; the rest of the batch is unaffected.
    """
    if not claims:
        return []

    def one(claim: str) -> ClaimCheckResult:
        try:
            return backends.verify_claim(claim)
        except Exception as exc:
            log.warning("verification failed for claim %r: %s", claim, exc)
            return ClaimCheckResult(
                claim_text=claim,
                stance=Stance.no_evidence,
                evidence_refs=(),
                confidence=0.0,
                warning=f"verification failed: {exc}",
            )

    if len(claims) == 1:
        return [one(claims[0])]
    with ThreadPoolExecutor(max_workers=min(max_concurrency, len(claims))) as pool:
        return list(pool.map(one, claims))


def collect_claims(
    transcript: str | None, video_summary: str | None, backends: AnalysisBackends
) -> list[str]:
    """Claims from transcript and summary, deduplicated, input order kept."""
    seen: set[str] = set()
    out: list[str] = []
    for text in (transcript, video_summary):
        if not text or not text.strip():
            continue
        for claim in detect_claims(text, backends):
            if claim not in seen:
                seen.add(claim)
                out.append(claim)
    return out
