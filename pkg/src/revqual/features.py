"""Canonical feature-vector assembly for the overall-quality estimator.

The schema is fixed and versioned: 11 structured metrics, 13 rubric
scores, 3 reviewer-profile metrics, and a profile-presence flag = 28
slots. Models refuse vectors whose schema_version differs from the one
they were trained with.
"""

import math
from dataclasses import dataclass

from .errors import SchemaMismatch
from .judge import ASPECT_KEYS, RubricScores
from .openalex import ReviewerProfile
from .textmetrics import StructuredMetrics

SCHEMA_VERSION = "fv1"

STRUCTURED_FEATURES = (
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
)

RUBRIC_FEATURES = tuple(f"rubric_{key}" for key in ASPECT_KEYS)

PROFILE_FEATURES = (
    "profile_citation_count",
    "profile_tenure_years",
    "profile_topical_alignment",
)

PRESENCE_FLAG = "profile_present"

FEATURE_SCHEMA = STRUCTURED_FEATURES + RUBRIC_FEATURES + PROFILE_FEATURES + (PRESENCE_FLAG,)

FEATURE_COUNT = len(FEATURE_SCHEMA)


@dataclass(frozen=True)
class FeatureVector:
    """One review's features in canonical schema order."""

    values: tuple[float, ...]
    schema_version: str = SCHEMA_VERSION
    schema: tuple[str, ...] = FEATURE_SCHEMA

    def __post_init__(self):
        if len(self.values) != len(self.schema):
            raise SchemaMismatch(
                f"feature vector has {len(self.values)} values for {len(self.schema)} schema slots"
            )
        for name, value in zip(self.schema, self.values):
            if not math.isfinite(value):
                raise SchemaMismatch(f"feature {name!r} is not finite: {value!r}")

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "values": {name: value for name, value in zip(self.schema, self.values)},
        }


def assemble_features(
    m: StructuredMetrics,
    r: RubricScores,
    p: ReviewerProfile | None = None,
) -> FeatureVector:
    """Build the canonical 28-slot feature vector.

    With no profile, the three profile slots are zero-filled and the
    presence flag is 0; a missing rubric aspect is a SchemaMismatch.
    """
    values = [
        float(m.review_length_tokens),
        float(m.hedge_density),
        float(m.lexical_diversity),
        float(m.readability_fre),
        float(m.politeness),
        float(m.sentiment),
        float(m.paper_similarity),
        float(m.structure_mentions),
        float(m.citation_mentions),
        float(m.question_count),
        1.0 if m.has_questions else 0.0,
    ]
    for key in ASPECT_KEYS:
        if key not in r.scores:
            raise SchemaMismatch(f"rubric scores lack aspect {key!r}")
        values.append(float(r.scores[key]))
    if p is None:
        values += [0.0, 0.0, 0.0, 0.0]
    else:
        # alignment is None when the profile was derived without any
        # submission text; the flag still records that a profile exists
        alignment = 0.0 if p.topical_alignment is None else float(p.topical_alignment)
        values += [
            float(p.citation_count),
            float(p.tenure_years),
            alignment,
            1.0,
        ]
    return FeatureVector(values=tuple(values))
