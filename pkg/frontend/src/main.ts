import { ApiClient, ApiError, validateDraft } from "./api.js";
import { BatchExplorer, parseAuditJsonl, SORTABLE_METRICS, type FilterRule } from "./batch.js";
import { renderCompare } from "./compare.js";
import { metricLabel } from "./format.js";
import { renderReport } from "./report_view.js";
import { resolveBaseUrl, SessionState } from "./state.js";
import type { ReviewDraft } from "./types.js";

export interface Dashboard {
  state: SessionState;
  explorer: BatchExplorer;
  submit(): Promise<void>;
  showCompare(): void;
  loadBatchText(text: string): void;
  setBaseUrl(url: string): void;
}

function byId<T extends HTMLElement>(root: Document, id: string): T {
  const el = root.getElementById(id);
  if (!el) throw new Error(`dashboard markup is missing #${id}`);
  return el as T;
}

function fillMetricSelect(select: HTMLSelectElement): void {
  for (const key of SORTABLE_METRICS) {
    const option = document.createElement("option");
    option.value = key;
    const short = key.split(".").pop() ?? key;
    option.textContent = key.startsWith("rubric.")
      ? `rubric: ${metricLabel(short)}`
      : metricLabel(short);
    select.appendChild(option);
  }
}

export function initDashboard(
  root: Document,
  api: ApiClient,
  state: SessionState,
): Dashboard {
  const form = byId<HTMLFormElement>(root, "review-form");
  const titleInput = byId<HTMLInputElement>(root, "field-title");
  const abstractInput = byId<HTMLTextAreaElement>(root, "field-abstract");
  const reviewInput = byId<HTMLTextAreaElement>(root, "field-review");
  const reviewerInput = byId<HTMLInputElement>(root, "field-reviewer");
  const skipLlmInput = byId<HTMLInputElement>(root, "field-skip-llm");
  const submitButton = byId<HTMLButtonElement>(root, "submit-button");
  const submitError = byId<HTMLDivElement>(root, "submit-error");
  const reportContainer = byId<HTMLDivElement>(root, "report-container");

  const apiBaseInput = byId<HTMLInputElement>(root, "api-base");
  const apiBaseApply = byId<HTMLButtonElement>(root, "api-base-apply");

  const compareButton = byId<HTMLButtonElement>(root, "compare-button");
  const compareContainer = byId<HTMLDivElement>(root, "compare-container");

  const batchFile = byId<HTMLInputElement>(root, "batch-file");
  const batchRoot = byId<HTMLDivElement>(root, "batch-root");
  const batchError = byId<HTMLDivElement>(root, "batch-error");
  const sortKey = byId<HTMLSelectElement>(root, "sort-key");
  const sortDirection = byId<HTMLSelectElement>(root, "sort-direction");
  const sortApply = byId<HTMLButtonElement>(root, "sort-apply");
  const filterKey = byId<HTMLSelectElement>(root, "filter-key");
  const filterOp = byId<HTMLSelectElement>(root, "filter-op");
  const filterThreshold = byId<HTMLInputElement>(root, "filter-threshold");
  const filterApply = byId<HTMLButtonElement>(root, "filter-apply");
  const filterClear = byId<HTMLButtonElement>(root, "filter-clear");
  const exportButton = byId<HTMLButtonElement>(root, "export-selection");

  fillMetricSelect(sortKey);
  fillMetricSelect(filterKey);
  apiBaseInput.value = state.baseUrl;

  let client = api;
  const explorer = new BatchExplorer(batchRoot);
  let revision = 0;
  let inFlight = false;

  const refreshCompareButton = () => {
    compareButton.disabled = !state.canCompare();
  };

  const submit = async (): Promise<void> => {
    if (inFlight) return; // one analyze request at a time
    submitError.textContent = "";
    const draft: ReviewDraft = {
      id: `revision-${revision + 1}`,
      title: titleInput.value.trim(),
      abstract: abstractInput.value.trim(),
      review_text: reviewInput.value,
      reviewer_openalex_id: reviewerInput.value.trim() || null,
    };
    const problem = validateDraft(draft);
    if (problem) {
      submitError.textContent = problem;
      return;
    }
    inFlight = true;
    submitButton.disabled = true;
    try {
      const report = await client.analyze(draft, {
        include_llm: !skipLlmInput.checked,
      });
      revision += 1;
      state.record(draft, report);
      reportContainer.textContent = "";
      reportContainer.appendChild(renderReport(report));
      refreshCompareButton();
    } catch (err) {
      if (err instanceof ApiError) {
        submitError.textContent = `${err.code}: ${err.detail}`;
      } else {
        submitError.textContent = `unexpected error: ${String(err)}`;
      }
    } finally {
      inFlight = false;
      submitButton.disabled = false;
    }
  };

  const showCompare = (): void => {
    if (!state.canCompare()) return;
    const [older, newer] = state.lastTwo();
    compareContainer.textContent = "";
    compareContainer.appendChild(renderCompare(older, newer));
  };

  const loadBatchText = (text: string): void => {
    batchError.textContent = "";
    const parsed = parseAuditJsonl(text);
    if (parsed.reports.length === 0 && parsed.badLines.length === 0) {
      batchError.textContent = "The file contains no reports.";
      return;
    }
    state.batch = parsed;
    explorer.load(parsed);
  };

  const setBaseUrl = (url: string): void => {
    client = client.withBase(url);
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit();
  });

  apiBaseApply.addEventListener("click", () => {
    setBaseUrl(apiBaseInput.value.trim());
  });

  compareButton.addEventListener("click", showCompare);

  batchFile.addEventListener("change", () => {
    const file = batchFile.files?.[0];
    if (!file) return;
    file
      .text()
      .then(loadBatchText)
      .catch((err) => {
        batchError.textContent = `could not read file: ${String(err)}`;
      });
  });

  sortApply.addEventListener("click", () => {
    explorer.sortBy(sortKey.value, sortDirection.value === "asc" ? "asc" : "desc");
  });

  filterApply.addEventListener("click", () => {
    const threshold = Number(filterThreshold.value);
    if (!filterThreshold.value.trim() || Number.isNaN(threshold)) {
      batchError.textContent = "Enter a numeric filter threshold.";
      return;
    }
    batchError.textContent = "";
    const rule: FilterRule = {
      key: filterKey.value,
      op: filterOp.value === ">=" ? ">=" : "<",
      threshold,
    };
    explorer.setFilter(rule);
  });

  filterClear.addEventListener("click", () => {
    batchError.textContent = "";
    explorer.setFilter(null);
  });

  exportButton.addEventListener("click", () => {
    if (explorer.selectedCount() === 0) {
      batchError.textContent = "Select at least one row to export.";
      return;
    }
    batchError.textContent = "";
    const json = explorer.exportSelection();
    try {
      const blob = new Blob([json], { type: "application/json" });
      const anchor = root.createElement("a");
      anchor.href = URL.createObjectURL(blob);
      anchor.download = "selected-reports.json";
      anchor.click();
      URL.revokeObjectURL(anchor.href);
    } catch {
      // Download is a convenience; the JSON itself is still available
      // through explorer.exportSelection().
    }
  });

  refreshCompareButton();
  return { state, explorer, submit, showCompare, loadBatchText, setBaseUrl };
}

// Boot only when the full page markup is present (not under tests
// that import modules individually).
if (typeof document !== "undefined" && document.getElementById("review-form")) {
  const baseUrl = resolveBaseUrl(window);
  initDashboard(document, new ApiClient(baseUrl), new SessionState(baseUrl));
}
