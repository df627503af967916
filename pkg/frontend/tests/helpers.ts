import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { HistoryEntry } from "../src/state.js";
import type { QualityReport, ReviewDraft } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

// Fresh copies so a test mutating its report cannot leak into others.
export function fullReport(): QualityReport {
  return JSON.parse(loadFixture("report_full.json")) as QualityReport;
}

export function degradedReport(): QualityReport {
  return JSON.parse(loadFixture("report_degraded.json")) as QualityReport;
}

export function pairEntries(): [HistoryEntry, HistoryEntry] {
  const doc = JSON.parse(loadFixture("report_pair.json")) as {
    entries: { input: ReviewDraft; report: QualityReport }[];
  };
  const [a, b] = doc.entries;
  if (!a || !b) throw new Error("report_pair.json must hold two entries");
  return [a, b];
}

// ---------------------------------------------------------------------------
// Stubbed service transport. Implements just the Response surface the
// client uses, so tests depend neither on the network nor on the host
// environment's fetch.

export interface StubReply {
  status?: number;
  body?: unknown;
  // When set, .json() rejects — simulates a non-JSON reply.
  invalidJson?: boolean;
}

export interface RecordedCall {
  url: string;
  init?: RequestInit;
}

export type StubHandler = (
  url: string,
  init?: RequestInit,
) => StubReply | Promise<StubReply>;

function fakeResponse(reply: StubReply): Response {
  const status = reply.status ?? 200;
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => {
      if (reply.invalidJson) throw new SyntaxError("not JSON");
      return structuredClone(reply.body);
    },
  } as unknown as Response;
}

export function stubFetch(handler: StubHandler): {
  fetchFn: typeof fetch;
  calls: RecordedCall[];
} {
  const calls: RecordedCall[] = [];
  const fetchFn = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    calls.push({ url, init });
    return fakeResponse(await handler(url, init));
  }) as typeof fetch;
  return { fetchFn, calls };
}

// A handler that always returns the given report for /v1/analyze and
// rejects any other URL — catching both wrong paths and any attempt
// to reach an origin other than the configured base.
export function analyzeOnly(base: string, report: () => QualityReport): StubHandler {
  return (url) => {
    if (url === `${base}/v1/analyze`) return { body: report() };
    throw new Error(`unexpected request to ${url}`);
  };
}

export function parseRequestBody(call: RecordedCall): Record<string, unknown> {
  return JSON.parse(String(call.init?.body)) as Record<string, unknown>;
}
