import { fmtValue, metricLabel } from "./format.js";
import { renderReport } from "./report_view.js";
import {
  isRubricScores,
  RUBRIC_KEYS,
  STRUCTURED_METRIC_KEYS,
  type QualityReport,
} from "./types.js";

export interface BadLine {
  line: number; // 1-based line number in the uploaded file
  reason: string;
}

export interface ParsedBatch {
  reports: QualityReport[];
  badLines: BadLine[];
  // The trailing {"summary": ...} object the audit CLI appends, if present.
  summary: Record<string, unknown> | null;
}

function looksLikeReport(doc: unknown): doc is QualityReport {
  return (
    typeof doc === "object" &&
    doc !== null &&
    typeof (doc as QualityReport).structured === "object" &&
    typeof (doc as QualityReport).degraded === "boolean"
  );
}

// Parse an audit JSONL stream: one QualityReport per line, optionally
// ending with a run-summary line. Malformed lines are collected and
// reported, never fatal.
export function parseAuditJsonl(text: string): ParsedBatch {
  const reports: QualityReport[] = [];
  const badLines: BadLine[] = [];
  let summary: ParsedBatch["summary"] = null;
  const lines = text.split("\n");
  lines.forEach((line, index) => {
    if (!line.trim()) return;
    let doc: unknown;
    try {
      doc = JSON.parse(line);
    } catch {
      badLines.push({ line: index + 1, reason: "not valid JSON" });
      return;
    }
    if (typeof doc === "object" && doc !== null && "summary" in doc) {
      summary = doc as Record<string, unknown>;
      return;
    }
    if (!looksLikeReport(doc)) {
      badLines.push({ line: index + 1, reason: "not a quality report" });
      return;
    }
    reports.push(doc);
  });
  return { reports, badLines, summary };
}

// Dotted metric path on a report: "overall_estimate",
// "structured.<metric>" or "rubric.scores.<aspect>". Returns null for
// anything absent (e.g. rubric on a degraded report).
export function metricValue(report: QualityReport, key: string): number | null {
  if (key === "overall_estimate") return report.overall_estimate;
  if (key.startsWith("structured.")) {
    const field = key.slice("structured.".length) as keyof QualityReport["structured"];
    const value = report.structured[field];
    if (value === undefined) return null;
    return typeof value === "boolean" ? (value ? 1 : 0) : value;
  }
  if (key.startsWith("rubric.scores.")) {
    if (!isRubricScores(report.rubric)) return null;
    const aspect = key.slice("rubric.scores.".length);
    const value = report.rubric.scores[aspect as keyof typeof report.rubric.scores];
    return value ?? null;
  }
  return null;
}

export const SORTABLE_METRICS: string[] = [
  "overall_estimate",
  ...STRUCTURED_METRIC_KEYS.map((k) => `structured.${k}`),
  ...RUBRIC_KEYS.map((k) => `rubric.scores.${k}`),
];

export interface FilterRule {
  key: string;
  op: "<" | ">=";
  threshold: number;
}

export type SortDirection = "asc" | "desc";

const TABLE_COLUMNS: { key: string; label: string }[] = [
  { key: "overall_estimate", label: "Overall estimate" },
  { key: "structured.review_length_tokens", label: metricLabel("review_length_tokens") },
  { key: "structured.politeness", label: metricLabel("politeness") },
  { key: "structured.sentiment", label: metricLabel("sentiment") },
  { key: "structured.readability_fre", label: metricLabel("readability_fre") },
  { key: "rubric.scores.overall_quality", label: "Rubric overall" },
];

// Sortable, filterable table over the reports of one uploaded audit
// file, with row click-through to the full report view and JSON
// export of the checked rows.
export class BatchExplorer {
  private all: QualityReport[] = [];
  private badLines: BadLine[] = [];
  private sortKey: string | null = null;
  private sortDirection: SortDirection = "desc";
  private filter: FilterRule | null = null;
  private selected = new Set<QualityReport>();

  constructor(
    private readonly root: HTMLElement,
    private readonly onOpen: (report: QualityReport) => void = () => {},
  ) {}

  load(batch: ParsedBatch): void {
    this.all = batch.reports;
    this.badLines = batch.badLines;
    this.sortKey = null;
    this.filter = null;
    this.selected.clear();
    this.render();
  }

  sortBy(key: string, direction: SortDirection): void {
    this.sortKey = key;
    this.sortDirection = direction;
    this.render();
  }

  setFilter(rule: FilterRule | null): void {
    this.filter = rule;
    this.render();
  }

  // Reports as currently displayed (filter applied, sort order).
  visibleReports(): QualityReport[] {
    let rows = [...this.all];
    const filter = this.filter;
    if (filter) {
      rows = rows.filter((report) => {
        const value = metricValue(report, filter.key);
        if (value === null) return false;
        return filter.op === "<" ? value < filter.threshold : value >= filter.threshold;
      });
    }
    const sortKey = this.sortKey;
    if (sortKey) {
      const sign = this.sortDirection === "asc" ? 1 : -1;
      rows.sort((a, b) => {
        const va = metricValue(a, sortKey);
        const vb = metricValue(b, sortKey);
        if (va === null && vb === null) return 0;
        if (va === null) return 1; // missing values sink to the bottom
        if (vb === null) return -1;
        return sign * (va - vb);
      });
    }
    return rows;
  }

  exportSelection(): string {
    return JSON.stringify([...this.selected], null, 2);
  }

  selectedCount(): number {
    return this.selected.size;
  }

  private render(): void {
    this.root.textContent = "";
    if (this.badLines.length > 0) {
      const banner = document.createElement("div");
      banner.className = "skipped-banner";
      const plural = this.badLines.length === 1 ? "line" : "lines";
      banner.textContent = `${this.badLines.length} ${plural} skipped`;
      const list = document.createElement("ul");
      for (const bad of this.badLines) {
        const item = document.createElement("li");
        item.textContent = `line ${bad.line}: ${bad.reason}`;
        list.appendChild(item);
      }
      banner.appendChild(list);
      this.root.appendChild(banner);
    }

    const table = document.createElement("table");
    table.className = "batch-table";
    const thead = document.createElement("thead");
    const headRow = document.createElement("tr");
    headRow.appendChild(document.createElement("th")); // selection column
    const idHead = document.createElement("th");
    idHead.textContent = "Review";
    headRow.appendChild(idHead);
    for (const column of TABLE_COLUMNS) {
      const th = document.createElement("th");
      th.className = "sortable";
      th.dataset.key = column.key;
      const active = this.sortKey === column.key;
      th.textContent = active
        ? `${column.label} ${this.sortDirection === "desc" ? "▼" : "▲"}`
        : column.label;
      th.addEventListener("click", () => {
        const direction: SortDirection =
          this.sortKey === column.key && this.sortDirection === "desc" ? "asc" : "desc";
        this.sortBy(column.key, direction);
      });
      headRow.appendChild(th);
    }
    thead.appendChild(headRow);
    table.appendChild(thead);

    const tbody = document.createElement("tbody");
    for (const report of this.visibleReports()) {
      const tr = document.createElement("tr");
      tr.className = "batch-row";
      tr.dataset.reportId = report.id ?? "";
      if (report.degraded) tr.classList.add("degraded-row");

      const selectCell = document.createElement("td");
      const checkbox = document.createElement("input");
      checkbox.type = "checkbox";
      checkbox.className = "row-select";
      checkbox.checked = this.selected.has(report);
      checkbox.addEventListener("click", (event) => event.stopPropagation());
      checkbox.addEventListener("change", () => {
        if (checkbox.checked) this.selected.add(report);
        else this.selected.delete(report);
      });
      selectCell.appendChild(checkbox);
      tr.appendChild(selectCell);

      const idCell = document.createElement("td");
      idCell.className = "report-id-cell";
      idCell.textContent = report.id ?? "—";
      tr.appendChild(idCell);

      for (const column of TABLE_COLUMNS) {
        const td = document.createElement("td");
        td.dataset.key = column.key;
        td.textContent = fmtValue(metricValue(report, column.key));
        tr.appendChild(td);
      }
      tr.addEventListener("click", () => this.openDetail(report));
      tbody.appendChild(tr);
    }
    table.appendChild(tbody);
    this.root.appendChild(table);

    const summaryLine = document.createElement("p");
    summaryLine.className = "batch-count";
    summaryLine.textContent = `${this.visibleReports().length} of ${this.all.length} reports shown`;
    this.root.appendChild(summaryLine);
  }

  private openDetail(report: QualityReport): void {
    this.onOpen(report);
    const existing = this.root.querySelector(".batch-detail");
    existing?.remove();
    const detail = document.createElement("div");
    detail.className = "batch-detail";
    const close = document.createElement("button");
    close.type = "button";
    close.className = "detail-close";
    close.textContent = "Close";
    close.addEventListener("click", () => detail.remove());
    detail.appendChild(close);
    detail.appendChild(renderReport(report));
    this.root.appendChild(detail);
  }
}
