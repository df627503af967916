"""
Walkthrough: analyzing a single peer review
===========================================

Runs one review through every analysis stage — structured text metrics,
rubric scoring, reviewer profile, and the combined report — using the
offline mock backends, so it works with no network and no API keys.

    python3 demos/analyze_one_review.py
"""

import json

from revqual.engine import AnalysisEngine, ReviewInput
from revqual.judge import MockJudgeBackend
from revqual.openalex import MockOpenAlexClient

# The engine is assembled from pluggable parts. Swapping MockJudgeBackend
# for an HTTP chat-completion backend (and the mock metadata client for the
# real one) is a configuration change, not a code change.
engine = AnalysisEngine(
    judge_backend=MockJudgeBackend(),
    openalex_client=MockOpenAlexClient(),
)

review = ReviewInput(
    title="Sparse Attention for Long Document Modeling",
    abstract=(
        "We propose a sparse attention mechanism that scales transformer "
        "models to long documents with near-linear cost."
    ),
    review_text=(
        "The paper is clearly written and Section 3 is convincing. "
        "However, Eq. 2 may be wrong; please compare against [3]. "
        "Why does Table 1 omit the strongest baseline?"
    ),
    reviewer_openalex_id="A2208157607",
)

report = engine.analyze(review)

# --- structured metrics -------------------------------------------------
# Deterministic, interpretable numbers computed directly from the text:
# length, hedging, lexical diversity, readability, politeness, sentiment,
# structural/citation mentions, questions, and similarity to the paper.
print("structured metrics")
for name, value in report.structured.to_dict().items():
    print(f"  {name:24} {value}")

# --- rubric scores ------------------------------------------------------
# Thirteen 1-5 dimensions scored by the judge backend against written
# anchors. The mock backend derives scores from a hash of the prompt, so
# this demo is reproducible byte-for-byte.
print("\nrubric scores (backend:", report.rubric.backend_id + ")")
for key, score in report.rubric.scores.items():
    print(f"  {key:24} {score}")

# --- reviewer profile ---------------------------------------------------
# Citation count, years since first publication, and topical alignment
# between the submission and the reviewer's recent work.
print("\nreviewer profile")
for name, value in report.profile.to_dict().items():
    print(f"  {name:24} {value}")

# --- the whole report as JSON ------------------------------------------
# This is exactly what the REST service and the CLI emit.
print("\nfull report (JSON)")
print(json.dumps(report.to_dict(), sort_keys=True, indent=2)[:400], "...")
