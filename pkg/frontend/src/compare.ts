import { fmtDelta, fmtValue, metricLabel } from "./format.js";
import type { HistoryEntry } from "./state.js";
import {
  isRubricScores,
  RUBRIC_KEYS,
  STRUCTURED_METRIC_KEYS,
  type QualityReport,
} from "./types.js";

export interface MetricDelta {
  key: string;
  group: "overall" | "structured" | "rubric";
  before: number | null;
  after: number | null;
  // null when either side is missing (e.g. a degraded rubric).
  delta: number | null;
}

function asNumber(value: number | boolean): number {
  return typeof value === "boolean" ? (value ? 1 : 0) : value;
}

// Per-metric differences between two reports, in display order:
// overall estimate first, then structured metrics, then rubric
// aspects. Only subtracts fields the service returned; no metric is
// recomputed here.
export function computeDeltas(before: QualityReport, after: QualityReport): MetricDelta[] {
  const deltas: MetricDelta[] = [];
  const push = (
    key: string,
    group: MetricDelta["group"],
    a: number | null,
    b: number | null,
  ) => {
    deltas.push({
      key,
      group,
      before: a,
      after: b,
      delta: a === null || b === null ? null : b - a,
    });
  };

  push("overall_estimate", "overall", before.overall_estimate, after.overall_estimate);
  for (const key of STRUCTURED_METRIC_KEYS) {
    push(key, "structured", asNumber(before.structured[key]), asNumber(after.structured[key]));
  }
  const rubricBefore = isRubricScores(before.rubric) ? before.rubric.scores : null;
  const rubricAfter = isRubricScores(after.rubric) ? after.rubric.scores : null;
  for (const key of RUBRIC_KEYS) {
    push(key, "rubric", rubricBefore?.[key] ?? null, rubricAfter?.[key] ?? null);
  }
  return deltas;
}

// Side-by-side diff of two history entries (the revision loop:
// edit, rescore, compare). Rubric rows that moved by a full point or
// more are flagged as major changes.
export function renderCompare(older: HistoryEntry, newer: HistoryEntry): HTMLElement {
  const root = document.createElement("section");
  root.className = "compare-view";

  const heading = document.createElement("h3");
  heading.className = "panel-title";
  heading.textContent = `Revision comparison: ${older.input.id ?? "previous"} → ${
    newer.input.id ?? "current"
  }`;
  root.appendChild(heading);

  const table = document.createElement("table");
  table.className = "compare-table";
  const head = document.createElement("thead");
  head.innerHTML =
    "<tr><th>Metric</th><th>Before</th><th>After</th><th>Change</th></tr>";
  table.appendChild(head);

  const tbody = document.createElement("tbody");
  let lastGroup: MetricDelta["group"] | null = null;
  const groupTitles: Record<MetricDelta["group"], string> = {
    overall: "Overall",
    structured: "Structured metrics",
    rubric: "Rubric scores",
  };
  for (const item of computeDeltas(older.report, newer.report)) {
    if (item.group !== lastGroup) {
      lastGroup = item.group;
      const sep = document.createElement("tr");
      sep.className = "compare-group";
      const cell = document.createElement("th");
      cell.colSpan = 4;
      cell.textContent = groupTitles[item.group];
      sep.appendChild(cell);
      tbody.appendChild(sep);
    }
    const tr = document.createElement("tr");
    tr.dataset.metric = item.key;
    tr.dataset.group = item.group;
    const major =
      item.group === "rubric" && item.delta !== null && Math.abs(item.delta) >= 1;
    if (major) tr.classList.add("delta-major");
    tr.dataset.major = String(major);

    const name = document.createElement("th");
    name.textContent = metricLabel(item.key);
    const before = document.createElement("td");
    before.textContent = fmtValue(item.before);
    const after = document.createElement("td");
    after.textContent = fmtValue(item.after);
    const change = document.createElement("td");
    change.className = "delta-cell";
    change.textContent = fmtDelta(item.delta);
    if (item.delta !== null) {
      change.classList.add(
        item.delta > 0 ? "delta-up" : item.delta < 0 ? "delta-down" : "delta-flat",
      );
    }
    tr.appendChild(name);
    tr.appendChild(before);
    tr.appendChild(after);
    tr.appendChild(change);
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  root.appendChild(table);
  return root;
}
