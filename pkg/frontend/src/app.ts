import { ApiError, TriageApi } from "./api.js";
import { el } from "./dom.js";
import { renderAnalysis, renderAnalysisMissing } from "./views/analysis.js";
import { renderConfusion, renderDrilldown, renderReportList, renderSkipped } from "./views/errors.js";
import { renderSubmit } from "./views/submit.js";

const api = new TriageApi("");

function mount(): HTMLElement {
  return document.getElementById("app") as HTMLElement;
}

function showError(err: unknown): void {
  const box = mount();
  if (err instanceof ApiError) {
    box.replaceChildren(
      el("div", "banner banner-error", [
        el("strong", "", [err.reason]),
        el("span", "", [err.detail ? `: ${err.detail}` : ""]),
      ]),
    );
    return;
  }
  const retry = el("button", "retry", ["retry"]);
  retry.addEventListener("click", () => route());
  box.replaceChildren(
    el("div", "banner banner-retry", [
      el("span", "", ["Service unreachable. It may be restarting."]),
      retry,
    ]),
  );
}

function showSubmit(): void {
  mount().replaceChildren(
    renderSubmit({
      api,
      onDone: (videoId) => {
        window.location.hash = `#/analysis/${videoId}`;
      },
    }),
  );
}

async function showAnalysis(videoId: string): Promise<void> {
  try {
    const record = await api.analysis(videoId);
    mount().replaceChildren(renderAnalysis(record));
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      mount().replaceChildren(renderAnalysisMissing(videoId));
      return;
    }
    showError(err);
  }
}

async function showReports(): Promise<void> {
  try {
    const { reports } = await api.reports();
    mount().replaceChildren(
      renderReportList(reports, (id) => {
        window.location.hash = `#/reports/${id}`;
      }),
    );
  } catch (err) {
    showError(err);
  }
}

async function showReport(reportId: string): Promise<void> {
  try {
    const [confusion, payload] = await Promise.all([
      api.confusion(reportId),
      api.report(reportId),
    ]);
    const details = el("div", "drilldown-slot");
    const page = el("div", "report-page", [
      renderConfusion(confusion, (gold, pred) => {
        details.replaceChildren(renderDrilldown(payload, gold, pred));
      }),
      details,
    ]);
    const skipped = renderSkipped(payload);
    if (skipped) {
      page.append(skipped);
    }
    mount().replaceChildren(page);
  } catch (err) {
    showError(err);
  }
}

function route(): void {
  const hash = window.location.hash || "#/submit";
  const analysis = hash.match(/^#\/analysis\/([\w.-]+)$/);
  if (analysis) {
    void showAnalysis(analysis[1]!);
    return;
  }
  const report = hash.match(/^#\/reports\/([\w-]+)$/);
  if (report) {
    void showReport(report[1]!);
    return;
  }
  if (hash === "#/reports") {
    void showReports();
    return;
  }
  showSubmit();
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);
