import type { QualityReport, ReviewDraft } from "./types.js";
import type { ParsedBatch } from "./batch.js";

export interface HistoryEntry {
  input: ReviewDraft;
  report: QualityReport;
}

// Everything the dashboard remembers about the current browser
// session. Nothing here is ever written to localStorage, cookies, or
// any other persistent store — closing the tab forgets all review
// text and results.
export class SessionState {
  readonly baseUrl: string;
  private readonly entries: HistoryEntry[] = [];
  batch: ParsedBatch | null = null;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl;
  }

  get history(): readonly HistoryEntry[] {
    return this.entries;
  }

  // Append-only: past entries are snapshots and never mutated, so the
  // compare view always diffs what was actually submitted.
  record(input: ReviewDraft, report: QualityReport): HistoryEntry {
    const entry: HistoryEntry = {
      input: structuredClone(input),
      report: structuredClone(report),
    };
    this.entries.push(entry);
    return entry;
  }

  canCompare(): boolean {
    return this.entries.length >= 2;
  }

  // The two most recent entries, oldest first.
  lastTwo(): [HistoryEntry, HistoryEntry] {
    if (!this.canCompare()) {
      throw new Error("need at least two analyzed revisions to compare");
    }
    const a = this.entries[this.entries.length - 2]!;
    const b = this.entries[this.entries.length - 1]!;
    return [a, b];
  }
}

// Base URL precedence: explicit global set by the embedding page,
// then an ?api= query parameter, then same-origin relative requests.
export function resolveBaseUrl(win: Pick<Window, "location"> & { __API_BASE__?: string }): string {
  if (typeof win.__API_BASE__ === "string") return win.__API_BASE__;
  const fromQuery = new URLSearchParams(win.location.search).get("api");
  if (fromQuery) return fromQuery;
  return "";
}
