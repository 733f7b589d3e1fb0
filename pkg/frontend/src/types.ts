/**
 * Payload shapes served by the triage service. These mirror the JSON the
 * API emits; the UI renders them as-is and never derives its own numbers.
 */

export type LabelName = "Checkworthy" | "Not_Checkworthy";

export type Verdict =
  | "political"
  | "hostile"
  | "benign"
  | "promotional"
  | "contentious_issue"
  | "unknown";

export type StanceName = "supported" | "refuted" | "disputed" | "no_evidence";

export interface BuzzwordHit {
  term: string;
  surface: string;
  source: "transcript" | "overlay";
  span: [number, number];
}

export interface ClaimResult {
  claim_text: string;
  stance: StanceName;
  evidence_refs: string[];
  confidence: number;
  warning: string | null;
}

export interface Signals {
  transcript: string | null;
  transcript_lang: string | null;
  overlay_text: string | null;
  video_summary: string | null;
  transcript_verdict: Verdict;
  summary_verdict: Verdict;
  overlay_verdict: Verdict;
  buzzword_hits: BuzzwordHit[];
  deepfake_score: number | null;
  claim_results: ClaimResult[];
  is_advertisement: boolean;
  weapon_detected: boolean;
}

export interface Contribution {
  signal: string;
  weight: number;
  rationale: string;
}

export interface DecisionResult {
  label: LabelName;
  score: number;
  threshold: number;
  contributions: Contribution[];
  ad_override: boolean;
}

export interface ModuleStatus {
  status: "ok" | "failed" | "disabled";
  ms: number;
  note: string | null;
}

export interface AnalysisRecord {
  video_id: string;
  config_digest: string;
  created_at: string;
  signals: Signals;
  result: DecisionResult;
  modules: Record<string, ModuleStatus>;
}

export interface SubmitResponse {
  video_id: string;
  job_id: string;
}

export interface Job {
  job_id: string;
  video_id: string;
  status: "queued" | "running" | "done" | "failed";
  error: string | null;
}

export interface ReportSummary {
  id: string;
  created_at: string;
  n: number;
  accuracy: number;
}

export interface RecordPrediction {
  video_id: string;
  gold: LabelName;
  pred: LabelName;
}

export interface EvalReport {
  n: number;
  accuracy: number;
  per_class: Record<string, Record<string, number>>;
  macro: Record<string, number>;
  weighted_f1: number;
  confusion: Record<string, Record<string, number>>;
  predictions: RecordPrediction[];
  skipped: { video_id: string; reason: string }[];
}

export interface ReportPayload {
  id: string;
  created_at: string;
  report: EvalReport;
}

export interface ConfusionPayload {
  id: string;
  created_at: string;
  labels: string[];
  matrix: number[][];
  n: number;
}
