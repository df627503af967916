// Shared display formatting. Every number shown in the UI goes
// through fmtValue so tests can trace rendered text back to response
// fields without worrying about float noise.

export function metricLabel(key: string): string {
  const overrides: Record<string, string> = {
    readability_fre: "Reading ease",
    review_length_tokens: "Length (tokens)",
    paper_similarity: "Paper similarity",
    topical_alignment: "Topical alignment",
  };
  const label = overrides[key];
  if (label) return label;
  const words = key.split("_").join(" ");
  return words.charAt(0).toUpperCase() + words.slice(1);
}

// Integers render bare; everything else with three decimals.
export function fmtValue(value: number | boolean | null | undefined): string {
  if (value === null || value === undefined) return "—";
  if (typeof value === "boolean") return value ? "yes" : "no";
  if (Number.isInteger(value)) return String(value);
  return value.toFixed(3);
}

export function fmtDelta(delta: number | null): string {
  if (delta === null) return "—";
  if (delta === 0) return "→ 0";
  const arrow = delta > 0 ? "↑" : "↓";
  const magnitude = Number.isInteger(delta)
    ? String(Math.abs(delta))
    : Math.abs(delta).toFixed(3);
  return `${arrow} ${delta > 0 ? "+" : "-"}${magnitude}`;
}
