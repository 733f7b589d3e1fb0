import type {
  AnalysisRecord,
  ClaimResult,
  ConfusionPayload,
  Job,
  ReportPayload,
  ReportSummary,
  SubmitResponse,
} from "./types.js";

/** A non-2xx response, carrying the service's machine-readable reason. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly reason: string,
    readonly detail: string,
  ) {
    super(detail ? `${reason}: ${detail}` : reason);
    this.name = "ApiError";
  }
}

export class TriageApi {
  constructor(readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, init);
    if (!resp.ok) {
      let reason = `HTTP ${resp.status}`;
      let detail = "";
      try {
        const body = (await resp.json()) as { error?: string; detail?: string };
        reason = body.error ?? reason;
        detail = body.detail ?? "";
      } catch {
        // non-JSON error body, keep the status line
      }
      throw new ApiError(resp.status, reason, detail);
    }
    return (await resp.json()) as T;
  }

  submitFile(file: Blob, name: string): Promise<SubmitResponse> {
    const form = new FormData();
    form.append("file", file, name);
    return this.request<SubmitResponse>("/videos", { method: "POST", body: form });
  }

  submitUrl(url: string): Promise<SubmitResponse> {
    return this.request<SubmitResponse>("/videos", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ url }),
    });
  }

  job(jobId: string): Promise<Job> {
    return this.request<Job>(`/jobs/${jobId}`);
  }

  analysis(videoId: string): Promise<AnalysisRecord> {
    return this.request<AnalysisRecord>(`/videos/${videoId}/analysis`);
  }

  factchecks(videoId: string): Promise<{ video_id: string; claims: ClaimResult[] }> {
    return this.request(`/videos/${videoId}/factchecks`);
  }

  reports(): Promise<{ reports: ReportSummary[] }> {
    return this.request("/eval/reports");
  }

  report(reportId: string): Promise<ReportPayload> {
    return this.request(`/eval/reports/${reportId}`);
  }

  confusion(reportId: string): Promise<ConfusionPayload> {
    return this.request(`/eval/reports/${reportId}/confusion`);
  }
}

/**
 * Poll a job until it settles. Resolves with the final job in both the
 * done and failed cases; only transport errors reject.
 */
export async function waitForJob(
  api: TriageApi,
  jobId: string,
  intervalMs = 400,
  maxAttempts = 300,
): Promise<Job> {
  for (let attempt = 0; attempt < maxAttempts; attempt++) {
    const job = await api.job(jobId);
    if (job.status === "done" || job.status === "failed") {
      return job;
    }
    await new Promise((resolve) => setTimeout(resolve, intervalMs));
  }
  throw new Error(`job ${jobId} did not settle after ${maxAttempts} polls`);
}
