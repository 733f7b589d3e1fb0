import { el, highlight, notAvailable, num, signedNum } from "../dom.js";
import type { AnalysisRecord, BuzzwordHit, Signals, Verdict } from "../types.js";

// Verdicts that read as alarming get the hot chip style; everything else
// stays neutral so the eye lands on what fired.
const ALERT_VERDICTS: Verdict[] = ["political", "hostile", "contentious_issue"];

function verdictChip(name: string, verdict: Verdict): HTMLElement {
  const hot = ALERT_VERDICTS.includes(verdict);
  const chip = el("span", hot ? "chip chip-alert" : "chip", [`${name}: ${verdict}`]);
  chip.dataset.verdict = verdict;
  return chip;
}

function textRow(label: string, value: string | null, hits: BuzzwordHit[] = []): HTMLElement {
  const body =
    value === null || value === ""
      ? notAvailable()
      : highlight(value, hits.map((h) => h.span));
  return el("div", "field", [el("span", "field-label", [label]), body]);
}

function signalsSection(signals: Signals): HTMLElement {
  const transcriptHits = signals.buzzword_hits.filter((h) => h.source === "transcript");
  const overlayHits = signals.buzzword_hits.filter((h) => h.source === "overlay");

  const transcriptLabel = signals.transcript_lang
    ? `transcript (${signals.transcript_lang})`
    : "transcript";

  const deepfake = el("div", "field", [el("span", "field-label", ["deepfake score"])]);
  deepfake.append(signals.deepfake_score === null ? notAvailable() : num(signals.deepfake_score));

  const hitList = el("ul", "hit-list");
  for (const hit of signals.buzzword_hits) {
    hitList.append(el("li", "", [`${hit.term} ("${hit.surface}", ${hit.source})`]));
  }

  return el("section", "signals", [
    el("h2", "", ["signals"]),
    textRow(transcriptLabel, signals.transcript, transcriptHits),
    textRow("overlay text", signals.overlay_text, overlayHits),
    textRow("summary", signals.video_summary),
    el("div", "field chips", [
      el("span", "field-label", ["verdicts"]),
      verdictChip("transcript", signals.transcript_verdict),
      verdictChip("summary", signals.summary_verdict),
      verdictChip("overlay", signals.overlay_verdict),
    ]),
    el("div", "field", [
      el("span", "field-label", ["buzzword hits"]),
      signals.buzzword_hits.length ? hitList : notAvailable(),
    ]),
    deepfake,
    el("div", "field", [
      el("span", "field-label", ["weapon detected"]),
      el("span", "", [signals.weapon_detected ? "yes" : "no"]),
    ]),
    el("div", "field", [
      el("span", "field-label", ["advertisement"]),
      el("span", "", [signals.is_advertisement ? "yes" : "no"]),
    ]),
  ]);
}

function claimsSection(signals: Signals): HTMLElement {
  const section = el("section", "claims", [el("h2", "", ["fact checks"])]);
  if (!signals.claim_results.length) {
    section.append(notAvailable());
    return section;
  }
  const list = el("ul", "claim-list");
  for (const claim of signals.claim_results) {
    const item = el("li", `claim stance-${claim.stance}`, [
      el("span", "chip", [claim.stance]),
      el("span", "claim-text", [claim.claim_text]),
      el("span", "claim-confidence", ["confidence "]),
    ]);
    item.lastElementChild!.append(num(claim.confidence));
    for (const ref of claim.evidence_refs) {
      const link = el("a", "evidence", [ref]);
      link.href = ref;
      link.target = "_blank";
      link.rel = "noopener";
      item.append(link);
    }
    if (claim.warning) {
      item.append(el("span", "warning", [claim.warning]));
    }
    list.append(item);
  }
  section.append(list);
  return section;
}

function ledgerSection(record: AnalysisRecord): HTMLElement {
  const table = el("table", "ledger");
  const head = el("tr", "", [
    el("th", "", ["weight"]),
    el("th", "", ["signal"]),
    el("th", "", ["rationale"]),
  ]);
  table.append(head);
  for (const c of record.result.contributions) {
    table.append(
      el("tr", c.weight > 0 ? "fired" : "silent", [
        el("td", "", [signedNum(c.weight)]),
        el("td", "", [c.signal]),
        el("td", "", [c.rationale]),
      ]),
    );
  }
  const total = el("tr", "total", [
    el("td", "", [num(record.result.score)]),
    el("td", "", ["score"]),
    el("td", "", ["threshold "]),
  ]);
  total.lastElementChild!.append(num(record.result.threshold));
  table.append(total);
  return el("section", "", [el("h2", "", ["contribution ledger"]), table]);
}

function modulesSection(record: AnalysisRecord): HTMLElement {
  const table = el("table", "modules");
  table.append(
    el("tr", "", [el("th", "", ["module"]), el("th", "", ["status"]), el("th", "", ["time"])]),
  );
  for (const [name, status] of Object.entries(record.modules)) {
    const time = el("td", "");
    const ms = num(status.ms, "num ms");
    ms.append(" ms");
    time.append(ms);
    const row = el("tr", `module-${status.status}`, [
      el("td", "", [name]),
      el("td", "", [status.note ? `${status.status}: ${status.note}` : status.status]),
      time,
    ]);
    table.append(row);
  }
  return el("section", "", [el("h2", "", ["modules"]), table]);
}

/** Full analysis page for one stored record. */
export function renderAnalysis(record: AnalysisRecord): HTMLElement {
  const root = el("article", "analysis");

  const badge = el(
    "span",
    record.result.label === "Checkworthy" ? "badge badge-checkworthy" : "badge",
    [record.result.label],
  );
  const score = el("span", "score-line", ["score "]);
  score.append(num(record.result.score), " of threshold ", num(record.result.threshold));
  root.append(el("header", "", [badge, score]));

  if (record.result.ad_override) {
    root.append(
      el("div", "banner banner-override", [
        "advertisement — overridden to Not_Checkworthy regardless of score",
      ]),
    );
  }

  root.append(
    el("div", "meta", [
      el("span", "", [`video ${record.video_id}`]),
      el("span", "", [`config ${record.config_digest}`]),
      el("span", "created-at", [record.created_at]),
    ]),
  );

  root.append(signalsSection(record.signals));
  root.append(claimsSection(record.signals));
  root.append(ledgerSection(record));
  root.append(modulesSection(record));
  return root;
}

/** 404 body for an analysis that is not in the store. */
export function renderAnalysisMissing(videoId: string): HTMLElement {
  return el("div", "empty-state", [
    el("h2", "", ["no analysis found"]),
    el("p", "", [
      `Nothing is stored for video ${videoId} under the active config. `,
      "Submit it first, or check the id.",
    ]),
  ]);
}
