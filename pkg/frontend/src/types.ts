// API record shapes. The UI mirrors these exactly and never computes
// judgments locally; every field shown in the table comes from the service.

export type Status = "candidate" | "accepted" | "rejected" | "edited";

export interface Violation {
  transcript_id: string;
  line_number: number;
  kind: string;
  relation: string;
  expected: string | null;
  found: string | null;
}

export interface NegationWarning {
  transcript_id: string;
  line_number: number;
  cue: string;
  sentence: string;
}

export interface Provenance {
  model_line: string | null;
  source_sentence: string | null;
}

export interface CandidateView {
  transcript_id: string;
  line_number: number;
  subject: string;
  relation: string;
  object: string;
  object_is_literal: boolean;
  source: string;
  status: Status;
  edited_value: [string, string, string] | null;
  violations: Violation[];
  cluster_id: number | null;
  negation_warning: NegationWarning | null;
  provenance: Provenance;
}

export interface SessionView {
  session_id: string;
  mode: string;
  gold_count: number | null;
  candidate_count: number;
  status_counts: Record<string, number>;
  cluster_count: number;
  relations: string[];
}

export interface MetricsView {
  mode: string;
  generated_count: number;
  correct_count: number;
  remaining_count: number;
  gold_count: number | null;
  extracted_count: number | null;
  precision: number | null;
  recall: number | null;
}

export type DecisionAction = "accept" | "reject" | "edit";

export interface KeepFirstResult {
  cluster_id: number;
  kept: [string, number];
  rejected: Array<[string, number]>;
}

export type CandidateRef = [string, number];

export function refOf(candidate: CandidateView): CandidateRef {
  return [candidate.transcript_id, candidate.line_number];
}

export function sameRef(a: CandidateRef, b: CandidateRef): boolean {
  return a[0] === b[0] && a[1] === b[1];
}
