import { ApiError, TriageApi, waitForJob } from "../api.js";
import { el } from "../dom.js";

export interface SubmitOptions {
  api: TriageApi;
  onDone: (videoId: string) => void;
  pollIntervalMs?: number;
}

function errorBanner(err: unknown, retry: () => void): HTMLElement {
  if (err instanceof ApiError) {
    // Service-side rejections carry a reason the reviewer should see as-is.
    const banner = el("div", "banner banner-error", [
      el("strong", "", [err.reason]),
      el("span", "", [err.detail ? `: ${err.detail}` : ""]),
    ]);
    banner.dataset.status = String(err.status);
    return banner;
  }
  // No response at all: the service is down or unreachable. Keep the form
  // alive and offer a retry instead of surfacing a stack trace.
  const button = el("button", "retry", ["retry"]);
  button.addEventListener("click", retry);
  return el("div", "banner banner-retry", [
    el("span", "", ["Service unreachable. It may be restarting."]),
    button,
  ]);
}

/** Upload form with file and URL modes, job progress, and error banners. */
export function renderSubmit(options: SubmitOptions): HTMLElement {
  const { api, onDone } = options;
  const pollInterval = options.pollIntervalMs ?? 400;

  const fileInput = el("input", "file-input");
  fileInput.type = "file";
  fileInput.accept = "video/*";

  const urlInput = el("input", "url-input");
  urlInput.type = "url";
  urlInput.placeholder = "https://example.com/clip.mp4";

  const submitFile = el("button", "submit", ["analyze file"]);
  submitFile.type = "button";
  const submitUrl = el("button", "submit", ["analyze url"]);
  submitUrl.type = "button";

  const status = el("div", "submit-status");
  const root = el("section", "submit", [
    el("h2", "", ["submit a video"]),
    el("div", "field", [fileInput, submitFile]),
    el("div", "field", [urlInput, submitUrl]),
    status,
  ]);

  const setBusy = (busy: boolean) => {
    submitFile.disabled = busy;
    submitUrl.disabled = busy;
  };

  async function track(jobId: string): Promise<void> {
    status.replaceChildren(el("p", "progress", [`job ${jobId}: queued`]));
    const job = await waitForJob(api, jobId, pollInterval);
    if (job.status === "failed") {
      status.replaceChildren(
        el("div", "banner banner-error", [
          el("strong", "", ["AnalysisFailed"]),
          el("span", "", [job.error ? `: ${job.error}` : ""]),
        ]),
      );
      return;
    }
    status.replaceChildren(el("p", "progress", [`job ${jobId}: done`]));
    onDone(job.video_id!);
  }

  function run(start: () => Promise<{ job_id: string }>): void {
    setBusy(true);
    status.replaceChildren(el("p", "progress", ["submitting"]));
    start()
      .then((resp) => track(resp.job_id))
      .catch((err: unknown) => {
        status.replaceChildren(errorBanner(err, () => run(start)));
      })
      .finally(() => setBusy(false));
  }

  submitFile.addEventListener("click", () => {
    const file = fileInput.files?.[0];
    if (!file) {
      status.replaceChildren(el("div", "banner banner-error", ["Choose a file first."]));
      return;
    }
    run(() => api.submitFile(file, file.name));
  });

  submitUrl.addEventListener("click", () => {
    const url = urlInput.value.trim();
    if (!url) {
      status.replaceChildren(el("div", "banner banner-error", ["Enter a URL first."]));
      return;
    }
    run(() => api.submitUrl(url));
  });

  return root;
}
