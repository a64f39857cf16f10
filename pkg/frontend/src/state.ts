/** Upload/poll session state, independent of the DOM.
 *
 * One ReviewSession drives one job at a time: submit uploads the files and
 * transitions idle -> uploading -> processing, then a poll loop tracks
 * per-file progress until the job is done or failed. Re-submitting starts a
 * new job that carries the previous review's paragraphs as prior context,
 * so follow-up entries stay coherent with what the user already has.
 */

import {
  ApiError,
  createReviewJob,
  FetchLike,
  getReviewJob,
  JobSnapshot,
} from "./api.js";

export type Phase = "idle" | "uploading" | "processing" | "done" | "error";

export interface FileRow {
  name: string;
  status: "pending" | "done" | "failed";
  error: string | null;
}

export interface UiJobView {
  jobId: string | null;
  files: FileRow[];
  processed: number;
  total: number;
  reviewText: string | null;
  phase: Phase;
  message: string | null;
}

export interface SessionOptions {
  baseUrl?: string;
  backend?: string;
  pollIntervalMs?: number;
  fetchFn?: FetchLike;
  sleep?: (ms: number) => Promise<void>;
  onChange?: (view: UiJobView) => void;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

export function initialView(): UiJobView {
  return {
    jobId: null,
    files: [],
    processed: 0,
    total: 0,
    reviewText: null,
    phase: "idle",
    message: null,
  };
}

export class ReviewSession {
  private view: UiJobView = initialView();
  private readonly baseUrl: string;
  private readonly backend: string;
  private readonly pollIntervalMs: number;
  private readonly fetchFn: FetchLike;
  private readonly sleep: (ms: number) => Promise<void>;
  private readonly onChange: (view: UiJobView) => void;
  private previousEntries: string[] = [];

  constructor(options: SessionOptions = {}) {
    this.baseUrl = options.baseUrl ?? "";
    this.backend = options.backend ?? "freq";
    this.pollIntervalMs = options.pollIntervalMs ?? 1000;
    this.fetchFn = options.fetchFn ?? fetch;
    this.sleep = options.sleep ?? defaultSleep;
    this.onChange = options.onChange ?? (() => {});
  }

  current(): UiJobView {
    return this.view;
  }

  /** True when a submit would be accepted; the UI disables the button otherwise. */
  canSubmit(files: readonly File[]): boolean {
    return files.length > 0 && this.view.phase !== "uploading" && this.view.phase !== "processing";
  }

  /** Upload files and poll the resulting job to completion. */
  async submit(files: File[]): Promise<UiJobView> {
    if (files.length === 0) {
      // Submitting nothing is blocked in the UI; guard it here too.
      return this.view;
    }
    if (!this.canSubmit(files)) {
      return this.view;
    }
    const priorEntries = this.previousEntries;
    this.update({
      ...initialView(),
      phase: "uploading",
      total: files.length,
      files: files.map((f) => ({ name: f.name, status: "pending", error: null })),
    });
    let jobId: string;
    try {
      jobId = await createReviewJob(
        this.baseUrl,
        files,
        { backend: this.backend, priorEntries },
        this.fetchFn,
      );
    } catch (err) {
      this.update({
        ...this.view,
        phase: "error",
        message: err instanceof ApiError ? err.message : "cannot reach the server",
      });
      return this.view;
    }
    this.update({ ...this.view, jobId, phase: "processing" });
    return this.poll(jobId);
  }

  /** Poll until done/failed; stale responses for older jobs are discarded. */
  async poll(jobId: string): Promise<UiJobView> {
    for (;;) {
      let snapshot: JobSnapshot;
      try {
        snapshot = await getReviewJob(this.baseUrl, jobId, this.fetchFn);
      } catch (err) {
        if (this.view.jobId !== jobId) return this.view; // superseded job
        this.update({
          ...this.view,
          phase: "error",
          message:
            err instanceof ApiError && err.status === 404
              ? "job not found"
              : "lost contact with the server",
        });
        return this.view;
      }
      if (this.view.jobId !== jobId || snapshot.job_id !== jobId) {
        return this.view; // stale response for a job we no longer track
      }
      this.applySnapshot(snapshot);
      if (snapshot.state === "done" || snapshot.state === "failed") {
        return this.view;
      }
      await this.sleep(this.pollIntervalMs);
    }
  }

  private applySnapshot(snapshot: JobSnapshot): void {
    const files: FileRow[] = snapshot.per_paper.map((p) => ({
      name: p.name,
      status: p.status,
      error: p.error,
    }));
    if (snapshot.state === "done") {
      const review = snapshot.review ?? "";
      this.previousEntries = review.split("\n\n").filter((p) => p.trim() !== "");
      this.update({
        ...this.view,
        files,
        processed: snapshot.processed,
        total: snapshot.total,
        reviewText: review,
        phase: "done",
        message: null,
      });
    } else if (snapshot.state === "failed") {
      const failures = files
        .filter((f) => f.status === "failed")
        .map((f) => `${f.name}: ${f.error ?? "failed"}`);
      this.update({
        ...this.view,
        files,
        processed: snapshot.processed,
        total: snapshot.total,
        reviewText: null,
        phase: "error",
        message: failures.length > 0 ? failures.join("; ") : (snapshot.error ?? "job failed"),
      });
    } else {
      // never show a review for a job that is not done
      this.update({
        ...this.view,
        files,
        processed: snapshot.processed,
        total: snapshot.total,
        reviewText: null,
        phase: "processing",
      });
    }
  }

  private update(view: UiJobView): void {
    this.view = view;
    this.onChange(this.view);
  }
}
