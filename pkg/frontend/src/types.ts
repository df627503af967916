// Mirrors the service's JSON schemas (schemas/*.schema.json at the
// repository root). Field names and optionality must match the wire
// format exactly; the dashboard renders these values verbatim.

export interface StructuredMetrics {
  review_length_tokens: number;
  hedge_density: number;
  lexical_diversity: number;
  readability_fre: number;
  politeness: number;
  sentiment: number;
  paper_similarity: number;
  structure_mentions: number;
  citation_mentions: number;
  question_count: number;
  has_questions: boolean;
}

// Schema order, used for table rows and batch columns.
export const STRUCTURED_METRIC_KEYS = [
  "review_length_tokens",
  "hedge_density",
  "lexical_diversity",
  "readability_fre",
  "politeness",
  "sentiment",
  "paper_similarity",
  "structure_mentions",
  "citation_mentions",
  "question_count",
  "has_questions",
] as const satisfies readonly (keyof StructuredMetrics)[];

export const RUBRIC_KEYS = [
  "overall_quality",
  "comprehensiveness",
  "actionability",
  "sentiment_polarity",
  "constructiveness",
  "technical_terms",
  "objectivity",
  "alignment",
  "vagueness",
  "fairness",
  "politeness",
  "clarity_readability",
  "factuality",
] as const;

export type RubricKey = (typeof RUBRIC_KEYS)[number];

export interface RubricScores {
  scores: Record<RubricKey, number>;
  rationales?: Record<string, string>;
  backend_id: string;
  prompt_version: string;
  attempts?: number;
}

// How a skipped or failed optional section is reported in place.
export interface SectionError {
  error: string;
  detail: string;
}

export interface ReviewerProfile {
  openalex_id: string;
  citation_count: number;
  tenure_years: number;
  topical_alignment?: number; // omitted when no submission text was supplied
  works_sampled: number;
  fetched_at: string;
}

export interface QualityReport {
  id?: string | null;
  structured: StructuredMetrics;
  rubric: RubricScores | SectionError | null;
  profile: ReviewerProfile | SectionError | null;
  overall_estimate: number | null;
  degraded: boolean;
  engine_version: string;
  schema_version: string;
  lexicon_hash: string;
  prompt_version: string;
  timings?: Record<string, number>;
}

export interface ErrorResponse {
  error: string;
  detail: string;
  status?: number;
}

export interface HealthStatus {
  status: "ok";
  engine_version: string;
  model_loaded: boolean;
}

// The analyze request body; review_text plus at least one of
// title/abstract must be non-empty (the service rejects otherwise).
export interface ReviewDraft {
  id?: string | null;
  title: string;
  abstract: string;
  review_text: string;
  reviewer_openalex_id?: string | null;
}

export function isSectionError(
  section: RubricScores | ReviewerProfile | SectionError | null,
): section is SectionError {
  return (
    section !== null &&
    "error" in section &&
    "detail" in section &&
    typeof (section as SectionError).error === "string"
  );
}

export function isRubricScores(
  section: QualityReport["rubric"],
): section is RubricScores {
  return section !== null && "scores" in section;
}

export function isReviewerProfile(
  section: QualityReport["profile"],
): section is ReviewerProfile {
  return section !== null && "openalex_id" in section;
}
