import { fmtValue, metricLabel } from "./format.js";
import { renderRadar } from "./radar.js";
import {
  isSectionError,
  RUBRIC_KEYS,
  STRUCTURED_METRIC_KEYS,
  type QualityReport,
  type ReviewerProfile,
  type SectionError,
} from "./types.js";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function sectionWarning(title: string, error: SectionError): HTMLElement {
  const box = el("div", "section-warning");
  const badge = el("span", "warning-badge", title);
  badge.dataset.errorCode = error.error;
  box.appendChild(badge);
  box.appendChild(el("p", "warning-detail", error.detail));
  return box;
}

function skippedNote(text: string): HTMLElement {
  return el("p", "section-skipped", text);
}

function structuredTable(report: QualityReport): HTMLElement {
  const table = document.createElement("table");
  table.className = "structured-table";
  const tbody = document.createElement("tbody");
  for (const key of STRUCTURED_METRIC_KEYS) {
    const tr = document.createElement("tr");
    tr.dataset.metric = key;
    const th = el("th", "metric-name", metricLabel(key));
    const td = el("td", "metric-value", fmtValue(report.structured[key]));
    tr.appendChild(th);
    tr.appendChild(td);
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  return table;
}

function overallGauge(estimate: number | null): HTMLElement {
  const gauge = el("div", "overall-gauge");
  const label = el("span", "gauge-label", "Overall estimate");
  gauge.appendChild(label);
  if (estimate === null) {
    gauge.appendChild(el("span", "gauge-value gauge-missing", "not available"));
    return gauge;
  }
  const value = el("span", "gauge-value", fmtValue(estimate));
  value.dataset.estimate = String(estimate);
  gauge.appendChild(value);
  const track = el("div", "gauge-track");
  const fill = el("div", "gauge-fill");
  // 1–5 scale mapped to 0–100% of the track, clamped for estimates
  // that extrapolate past the ends.
  const percent = Math.max(0, Math.min(100, ((estimate - 1) / 4) * 100));
  fill.style.width = `${percent}%`;
  track.appendChild(fill);
  gauge.appendChild(track);
  return gauge;
}

function rubricPanel(report: QualityReport): HTMLElement {
  const panel = el("section", "rubric-panel");
  panel.appendChild(el("h3", "panel-title", "Rubric scores"));
  const rubric = report.rubric;
  if (rubric === null) {
    panel.appendChild(skippedNote("Rubric judging was skipped for this run."));
    return panel;
  }
  if (isSectionError(rubric)) {
    panel.appendChild(sectionWarning("judge unavailable", rubric));
    return panel;
  }
  panel.appendChild(renderRadar(rubric.scores));
  const list = document.createElement("ul");
  list.className = "rubric-list";
  for (const key of RUBRIC_KEYS) {
    const item = document.createElement("li");
    item.dataset.aspect = key;
    item.textContent = `${metricLabel(key)}: ${fmtValue(rubric.scores[key])}`;
    const rationale = rubric.rationales?.[key];
    if (rationale) item.title = rationale;
    list.appendChild(item);
  }
  panel.appendChild(list);
  const provenance = el(
    "p",
    "rubric-provenance",
    `judge: ${rubric.backend_id} · prompt: ${rubric.prompt_version}`,
  );
  panel.appendChild(provenance);
  return panel;
}

function profileCard(profile: ReviewerProfile): HTMLElement {
  const card = el("div", "profile-card");
  card.dataset.openalexId = profile.openalex_id;
  card.appendChild(el("h4", "profile-id", profile.openalex_id));
  const rows: [string, string][] = [
    ["Citations", fmtValue(profile.citation_count)],
    ["Tenure (years)", fmtValue(profile.tenure_years)],
    ["Works sampled", fmtValue(profile.works_sampled)],
  ];
  if (profile.topical_alignment !== undefined) {
    rows.push([metricLabel("topical_alignment"), fmtValue(profile.topical_alignment)]);
  }
  const dl = document.createElement("dl");
  for (const [name, value] of rows) {
    const dt = el("dt", "profile-field", name);
    const dd = el("dd", "profile-value", value);
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
  card.appendChild(dl);
  card.appendChild(el("p", "profile-fetched", `fetched ${profile.fetched_at}`));
  return card;
}

function profilePanel(report: QualityReport): HTMLElement {
  const panel = el("section", "profile-panel");
  panel.appendChild(el("h3", "panel-title", "Reviewer profile"));
  const profile = report.profile;
  if (profile === null) {
    panel.appendChild(skippedNote("No reviewer ID was supplied."));
    return panel;
  }
  if (isSectionError(profile)) {
    panel.appendChild(sectionWarning("profile unavailable", profile));
    return panel;
  }
  panel.appendChild(profileCard(profile));
  return panel;
}

// Full single-report view: structured metrics, rubric radar, overall
// gauge, and reviewer profile. Degraded sections render an explicit
// warning in place; nothing is silently dropped.
export function renderReport(report: QualityReport): HTMLElement {
  const root = el("article", "quality-report");
  if (report.degraded) root.classList.add("degraded");

  const header = el("header", "report-header");
  header.appendChild(el("h2", "report-id", report.id ?? "untitled review"));
  if (report.degraded) {
    header.appendChild(el("span", "degraded-badge", "degraded result"));
  }
  root.appendChild(header);

  root.appendChild(overallGauge(report.overall_estimate));

  const structuredSection = el("section", "structured-panel");
  structuredSection.appendChild(el("h3", "panel-title", "Structured metrics"));
  structuredSection.appendChild(structuredTable(report));
  root.appendChild(structuredSection);

  root.appendChild(rubricPanel(report));
  root.appendChild(profilePanel(report));

  const footer = el(
    "footer",
    "report-footer",
    `engine ${report.engine_version} · features ${report.schema_version} · ` +
      `lexicons ${report.lexicon_hash} · prompt ${report.prompt_version}`,
  );
  root.appendChild(footer);
  return root;
}
