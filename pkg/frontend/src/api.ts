// Thin typed client for the review-service JSON API. All state mutations in
// the app flow through this module.

import type {
  CandidateView,
  DecisionAction,
  KeepFirstResult,
  MetricsView,
  SessionView,
} from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ConflictError extends ApiError {
  constructor(message: string) {
    super(message, 409);
  }
}

async function parseError(response: Response): Promise<never> {
  let message = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string };
    if (body.error) message = body.error;
  } catch {
    // non-JSON error body; keep the status text
  }
  if (response.status === 409) throw new ConflictError(message);
  throw new ApiError(message, response.status);
}

export interface CandidateFilter {
  status?: string;
  violations?: string;
}

export class ReviewApi {
  constructor(readonly base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path, { cache: "no-store" });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body ?? {}),
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  getSession(): Promise<SessionView> {
    return this.get("/api/session");
  }

  getCandidates(filter: CandidateFilter = {}): Promise<CandidateView[]> {
    const params = new URLSearchParams();
    if (filter.status) params.set("status", filter.status);
    if (filter.violations) params.set("violations", filter.violations);
    const query = params.toString();
    return this.get(`/api/candidates${query ? "?" + query : ""}`);
  }

  getMetrics(): Promise<MetricsView> {
    return this.get("/api/metrics");
  }

  postDecision(
    transcriptId: string,
    lineNumber: number,
    action: DecisionAction,
    replacement?: [string, string, string],
  ): Promise<CandidateView> {
    const body: Record<string, unknown> = { action };
    if (replacement) body.replacement = replacement;
    return this.post(
      `/api/candidates/${encodeURIComponent(transcriptId)}/${lineNumber}/decision`,
      body,
    );
  }

  keepFirst(clusterId: number): Promise<KeepFirstResult> {
    return this.post(`/api/clusters/${clusterId}/keep-first`, {});
  }

  exportSession(outDir?: string): Promise<{ triples: number; metrics: MetricsView }> {
    return this.post("/api/export", outDir ? { out_dir: outDir } : {});
  }
}
