import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent / "fixtures"
SCHEMAS = Path(__file__).resolve().parents[1] / "schemas"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def schemas_dir() -> Path:
    return SCHEMAS


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return FIXTURES / "corpus.jsonl"


@pytest.fixture(scope="session")
def corpus_records(corpus_path):
    return [json.loads(line) for line in corpus_path.read_text(encoding="utf-8").splitlines()]


def canonicalize_report(doc: dict) -> str:
    """Serialize a report dict with the run-variable parts removed."""
    doc = dict(doc)
    doc.pop("timings", None)
    return json.dumps(doc, sort_keys=True)


@pytest.fixture(scope="session")
def canonical_report():
    return canonicalize_report


@pytest.fixture(scope="session")
def sample_review() -> dict:
    return {
        "id": "sample",
        "title": "Sparse Attention for Long Document Modeling",
        "abstract": "We propose a sparse attention mechanism that scales transformer models to long documents with near-linear cost.",
        "review_text": (
            "The paper is clearly written and Section 3 is convincing. "
            "However, Eq. 2 may be wrong; please compare against [3]. "
            "Why does Table 1 omit the strongest baseline?"
        ),
        "reviewer_openalex_id": "A2208157607",
    }
