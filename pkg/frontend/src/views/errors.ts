import { el, num } from "../dom.js";
import type { ConfusionPayload, ReportPayload, ReportSummary } from "../types.js";

/** Listing of stored evaluation reports, newest first per the API. */
export function renderReportList(
  reports: ReportSummary[],
  onOpen: (id: string) => void,
): HTMLElement {
  if (!reports.length) {
    return el("div", "empty-state", [
      el("h2", "", ["no evaluation reports"]),
      el("p", "", ["Run an evaluation against a labeled dataset and its report will appear here."]),
    ]);
  }
  const list = el("ul", "report-list");
  for (const r of reports) {
    const open = el("a", "report-link", [r.id]);
    open.href = `#/reports/${r.id}`;
    open.addEventListener("click", (ev) => {
      ev.preventDefault();
      onOpen(r.id);
    });
    const item = el("li", "report-row", [open, el("span", "", [r.created_at]), el("span", "", [])]);
    const counts = item.lastElementChild!;
    counts.append(num(r.n), " records, accuracy ", num(r.accuracy));
    list.append(item);
  }
  return el("section", "", [el("h2", "", ["evaluation reports"]), list]);
}

/**
 * 2x2 confusion matrix. Cells are buttons; clicking one calls back with
 * the (gold, pred) pair so the page can show the matching records.
 */
export function renderConfusion(
  confusion: ConfusionPayload,
  onCell: (gold: string, pred: string) => void,
): HTMLElement {
  const table = el("table", "confusion");
  const head = el("tr", "", [el("th", "", ["gold \\ pred"])]);
  for (const label of confusion.labels) {
    head.append(el("th", "", [label]));
  }
  table.append(head);

  confusion.matrix.forEach((row, i) => {
    const gold = confusion.labels[i]!;
    const tr = el("tr", "", [el("th", "", [gold])]);
    row.forEach((count, j) => {
      const pred = confusion.labels[j]!;
      const button = el("button", gold === pred ? "cell cell-correct" : "cell cell-error");
      button.append(num(count));
      button.dataset.gold = gold;
      button.dataset.pred = pred;
      button.addEventListener("click", () => onCell(gold, pred));
      tr.append(el("td", "", [button]));
    });
    table.append(tr);
  });

  const caption = el("p", "confusion-caption", []);
  caption.append(num(confusion.n), " records");
  return el("section", "", [el("h2", "", ["confusion matrix"]), table, caption]);
}

/** Records from one confusion cell, each linking to its analysis page. */
export function renderDrilldown(
  payload: ReportPayload,
  gold: string,
  pred: string,
): HTMLElement {
  const matches = payload.report.predictions.filter((p) => p.gold === gold && p.pred === pred);
  const section = el("section", "drilldown", [
    el("h2", "", [`gold ${gold}, predicted ${pred}`]),
  ]);
  if (!matches.length) {
    section.append(el("p", "empty-state", ["No records in this cell."]));
    return section;
  }
  const list = el("ul", "record-list");
  for (const p of matches) {
    const link = el("a", "", [p.video_id]);
    link.href = `#/analysis/${p.video_id}`;
    list.append(el("li", "", [link]));
  }
  section.append(list);
  return section;
}

/** Skipped-video footer for a report, omitted when nothing was skipped. */
export function renderSkipped(payload: ReportPayload): HTMLElement | null {
  const skipped = payload.report.skipped;
  if (!skipped.length) {
    return null;
  }
  const list = el("ul", "skip-list");
  for (const s of skipped) {
    list.append(el("li", "", [`${s.video_id}: ${s.reason}`]));
  }
  return el("section", "", [el("h2", "", ["skipped"]), list]);
}
