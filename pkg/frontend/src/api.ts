import type {
  ErrorResponse,
  HealthStatus,
  QualityReport,
  ReviewDraft,
  ReviewerProfile,
} from "./types.js";

// Raised for any non-2xx reply; carries the service's machine-readable
// error code so the UI can show it inline next to the failing panel.
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let body: ErrorResponse | null = null;
  try {
    body = (await response.json()) as ErrorResponse;
  } catch {
    body = null;
  }
  if (body && typeof body.error === "string" && typeof body.detail === "string") {
    return new ApiError(response.status, body.error, body.detail);
  }
  return new ApiError(response.status, "http_error", `HTTP ${response.status}`);
}

export interface AnalyzeOptions {
  include_llm?: boolean;
  include_profile?: boolean | null;
  require_estimate?: boolean;
}

// Thin client for the review-quality service. Every request goes to
// the single configured base URL; the dashboard talks to no other
// origin. The fetch function is injectable so tests can stub the
// service without network access.
export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: typeof fetch;

  constructor(baseUrl: string, fetchFn: typeof fetch = fetch) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn;
  }

  get baseUrl(): string {
    return this.base;
  }

  // Same transport, different service location (runtime reconfiguration).
  withBase(baseUrl: string): ApiClient {
    return new ApiClient(baseUrl, this.fetchFn);
  }

  private async getJson<T>(url: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(url);
    } catch (err) {
      throw new ApiError(0, "unreachable", `service unreachable: ${String(err)}`);
    }
    if (!response.ok) throw await parseError(response);
    try {
      return (await response.json()) as T;
    } catch {
      throw new ApiError(response.status, "invalid_response", "reply was not JSON");
    }
  }

  async analyze(draft: ReviewDraft, options: AnalyzeOptions = {}): Promise<QualityReport> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.base}/v1/analyze`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ ...draft, ...options }),
      });
    } catch (err) {
      throw new ApiError(0, "unreachable", `service unreachable: ${String(err)}`);
    }
    if (!response.ok) throw await parseError(response);
    try {
      return (await response.json()) as QualityReport;
    } catch {
      throw new ApiError(response.status, "invalid_response", "reply was not JSON");
    }
  }

  async reviewer(openalexId: string, submissionText = ""): Promise<ReviewerProfile> {
    const query = submissionText
      ? `?submission_text=${encodeURIComponent(submissionText)}`
      : "";
    return this.getJson(`${this.base}/v1/reviewer/${encodeURIComponent(openalexId)}${query}`);
  }

  async health(): Promise<HealthStatus> {
    return this.getJson(`${this.base}/v1/health`);
  }
}

// Client-side mirror of the service's 422 rules, so obviously invalid
// drafts are flagged before any network call is made.
export function validateDraft(draft: ReviewDraft): string | null {
  if (!draft.review_text.trim()) {
    return "Review text must not be empty.";
  }
  if (!draft.title.trim() && !draft.abstract.trim()) {
    return "Provide the paper title or its abstract (or both).";
  }
  return null;
}
