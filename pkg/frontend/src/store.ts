// Application state: a snapshot of the service plus UI-local selection and
// filters. Decisions are applied optimistically and reconciled against the
// server response and the regular polls; the metrics panel always shows the
// metrics object the service returned, never a local recomputation.

import { ConflictError, ReviewApi } from "./api.js";
import type {
  CandidateRef,
  CandidateView,
  DecisionAction,
  MetricsView,
  SessionView,
  Status,
} from "./types.js";
import { refOf, sameRef } from "./types.js";

export interface AppState {
  session: SessionView | null;
  candidates: CandidateView[];
  metrics: MetricsView | null;
  connected: boolean;
  banner: string | null;
  notice: string | null;
  selected: number;
  statusFilter: Status | "all";
  violationFilter: string | "all";
  page: number;
  editing: CandidateRef | null;
}

export const PAGE_SIZE = 25;
export const POLL_INTERVAL_MS = 2000;

type Listener = (state: AppState) => void;

export class Store {
  state: AppState = {
    session: null,
    candidates: [],
    metrics: null,
    connected: false,
    banner: null,
    notice: null,
    selected: 0,
    statusFilter: "all",
    violationFilter: "all",
    page: 0,
    editing: null,
  };

  private listeners: Listener[] = [];
  private timer: ReturnType<typeof setInterval> | null = null;
  private pending = 0;
  private idleResolvers: Array<() => void> = [];

  constructor(
    readonly api: ReviewApi,
    readonly pollMs: number = POLL_INTERVAL_MS,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private update(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    this.notify();
  }

  private enter(): void {
    this.pending += 1;
  }

  private leave(): void {
    this.pending -= 1;
    if (this.pending === 0) {
      for (const resolve of this.idleResolvers.splice(0)) resolve();
    }
  }

  /** Resolves once no refresh or decision request is in flight. */
  waitIdle(): Promise<void> {
    if (this.pending === 0) return Promise.resolve();
    return new Promise((resolve) => this.idleResolvers.push(resolve));
  }

  async refresh(): Promise<void> {
    this.enter();
    try {
      const [session, candidates, metrics] = await Promise.all([
        this.api.getSession(),
        this.api.getCandidates(),
        this.api.getMetrics(),
      ]);
      this.update({ session, candidates, metrics, connected: true, banner: null });
    } catch (error) {
      this.update({
        connected: false,
        banner: `service unreachable: ${(error as Error).message}`,
      });
    } finally {
      this.leave();
    }
  }

  startPolling(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.refresh(), this.pollMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  /** Candidates passing the active filters, in server order. */
  filtered(): CandidateView[] {
    return this.state.candidates.filter((candidate) => {
      if (this.state.statusFilter !== "all" && candidate.status !== this.state.statusFilter) {
        return false;
      }
      if (
        this.state.violationFilter !== "all" &&
        !candidate.violations.some((v) => v.kind === this.state.violationFilter)
      ) {
        return false;
      }
      return true;
    });
  }

  pageCount(): number {
    return Math.max(1, Math.ceil(this.filtered().length / PAGE_SIZE));
  }

  /** The current page of the filtered table. */
  visible(): CandidateView[] {
    const start = this.state.page * PAGE_SIZE;
    return this.filtered().slice(start, start + PAGE_SIZE);
  }

  selectedCandidate(): CandidateView | null {
    return this.visible()[this.state.selected] ?? null;
  }

  moveSelection(delta: number): void {
    const count = this.visible().length;
    if (count === 0) return;
    const next = Math.min(count - 1, Math.max(0, this.state.selected + delta));
    this.update({ selected: next, editing: null });
  }

  setPage(delta: number): void {
    const next = Math.min(this.pageCount() - 1, Math.max(0, this.state.page + delta));
    this.update({ page: next, selected: 0, editing: null });
  }

  setStatusFilter(filter: Status | "all"): void {
    this.update({ statusFilter: filter, page: 0, selected: 0, editing: null });
  }

  setViolationFilter(filter: string | "all"): void {
    this.update({ violationFilter: filter, page: 0, selected: 0, editing: null });
  }

  beginEdit(ref: CandidateRef): void {
    this.update({ editing: ref, notice: null });
  }

  cancelEdit(): void {
    this.update({ editing: null });
  }

  private replaceCandidate(ref: CandidateRef, next: CandidateView): void {
    this.update({
      candidates: this.state.candidates.map((c) => (sameRef(refOf(c), ref) ? next : c)),
    });
  }

  async decide(
    ref: CandidateRef,
    action: DecisionAction,
    replacement?: [string, string, string],
  ): Promise<boolean> {
    const current = this.state.candidates.find((c) => sameRef(refOf(c), ref));
    if (!current || current.status !== "candidate") return false;
    const optimisticStatus: Status = action === "edit" ? "edited" : (`${action}ed` as Status);
    this.enter();
    this.replaceCandidate(ref, { ...current, status: optimisticStatus });
    this.update({ notice: null, editing: null });
    try {
      const confirmed = await this.api.postDecision(ref[0], ref[1], action, replacement);
      this.replaceCandidate(ref, confirmed);
      // Metrics always come back from the service; nothing is recomputed here.
      this.update({ metrics: await this.api.getMetrics() });
      return true;
    } catch (error) {
      this.replaceCandidate(ref, current);
      if (error instanceof ConflictError) {
        this.update({ notice: `decision conflict: ${error.message}` });
        void this.refresh();
      } else {
        this.update({
          connected: false,
          banner: `service unreachable: ${(error as Error).message}`,
        });
      }
      return false;
    } finally {
      this.leave();
    }
  }

  async keepFirst(clusterId: number): Promise<boolean> {
    this.enter();
    try {
      await this.api.keepFirst(clusterId);
      await this.refresh();
      return true;
    } catch (error) {
      if (error instanceof ConflictError) {
        this.update({ notice: `cluster already resolved: ${error.message}` });
      } else {
        this.update({
          connected: false,
          banner: `service unreachable: ${(error as Error).message}`,
        });
      }
      return false;
    } finally {
      this.leave();
    }
  }

  /** Duplicate clusters derived from the per-candidate tags the service sent. */
  clusters(): Map<number, CandidateView[]> {
    const groups = new Map<number, CandidateView[]>();
    for (const candidate of this.state.candidates) {
      if (candidate.cluster_id === null) continue;
      const members = groups.get(candidate.cluster_id) ?? [];
      members.push(candidate);
      groups.set(candidate.cluster_id, members);
    }
    return groups;
  }
}
