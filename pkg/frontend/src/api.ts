/** Typed client for the review service HTTP API. */

export interface PaperProgress {
  name: string;
  status: "pending" | "done" | "failed";
  error: string | null;
}

export interface JobSnapshot {
  job_id: string;
  total: number;
  processed: number;
  state: "pending" | "running" | "done" | "failed";
  review: string | null;
  error: string | null;
  per_paper: PaperProgress[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export type FetchLike = typeof fetch;

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // fall through to the status line
  }
  return `request failed with HTTP ${response.status}`;
}

export async function createReviewJob(
  baseUrl: string,
  files: File[],
  options: { backend?: string; wordCap?: number; priorEntries?: string[] } = {},
  fetchFn: FetchLike = fetch,
): Promise<string> {
  const form = new FormData();
  for (const file of files) {
    form.append("files", file, file.name);
  }
  if (options.backend) form.append("backend", options.backend);
  if (options.wordCap) form.append("word_cap", String(options.wordCap));
  if (options.priorEntries && options.priorEntries.length > 0) {
    form.append("prior_entries", JSON.stringify(options.priorEntries));
  }
  const response = await fetchFn(`${baseUrl}/api/reviews`, {
    method: "POST",
    body: form,
  });
  if (!response.ok) {
    throw new ApiError(response.status, await errorDetail(response));
  }
  const body = await response.json();
  return body.job_id as string;
}

export async function getReviewJob(
  baseUrl: string,
  jobId: string,
  fetchFn: FetchLike = fetch,
): Promise<JobSnapshot> {
  const response = await fetchFn(`${baseUrl}/api/reviews/${jobId}`);
  if (!response.ok) {
    throw new ApiError(response.status, await errorDetail(response));
  }
  return (await response.json()) as JobSnapshot;
}
