"""Line-delimited JSON corpus of reviews, annotated or not.

One record per line. Plain records carry the analysis inputs; annotated
records additionally carry human aspect scores (all 13, integers 1..5)
and a continuous human overall score on the [1, 5] scale, which is the
training target.
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .engine import ReviewInput
from .errors import InvalidInput, TooFewSamples
from .judge import ASPECT_KEYS

MIN_TRAINING_RECORDS = 20


@dataclass(frozen=True)
class AnnotatedReview:
    """A review plus its human quality annotations."""

    id: str
    title: str
    abstract: str
    review_text: str
    human_aspects: dict
    human_overall: float
    reviewer_openalex_id: str | None = None

    def __post_init__(self):
        missing = [k for k in ASPECT_KEYS if k not in self.human_aspects]
        if missing:
            raise InvalidInput(
                "missing_aspects", f"annotated record {self.id!r} lacks aspects: {', '.join(missing)}"
            )
        for key, value in self.human_aspects.items():
            if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
                raise InvalidInput(
                    "bad_aspect_score",
                    f"record {self.id!r}: aspect {key!r} score {value!r} not an integer in 1..5",
                )
        if not isinstance(self.human_overall, (int, float)) or not 1.0 <= float(self.human_overall) <= 5.0:
            raise InvalidInput(
                "bad_overall_score",
                f"record {self.id!r}: human_overall {self.human_overall!r} not in [1, 5]",
            )

    @classmethod
    def from_dict(cls, obj: dict) -> "AnnotatedReview":
        if not isinstance(obj, dict):
            raise InvalidInput("not_an_object", "corpus record must be a JSON object")
        try:
            record = cls(
                id=str(obj["id"]),
                title=obj.get("title", ""),
                abstract=obj.get("abstract", ""),
                review_text=obj.get("review_text", ""),
                human_aspects=obj["human_aspects"],
                human_overall=float(obj["human_overall"]),
                reviewer_openalex_id=obj.get("reviewer_openalex_id"),
            )
        except KeyError as exc:
            raise InvalidInput("missing_field", f"corpus record lacks field {exc.args[0]!r}") from exc
        except (TypeError, ValueError) as exc:
            raise InvalidInput("bad_field_type", f"corpus record field invalid: {exc}") from exc
        # Reuse the analysis-input validation (non-empty review, context, ID syntax).
        record.to_review_input()
        return record

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "review_text": self.review_text,
            "human_aspects": dict(self.human_aspects),
            "human_overall": self.human_overall,
        }
        if self.reviewer_openalex_id is not None:
            out["reviewer_openalex_id"] = self.reviewer_openalex_id
        return out

    def to_review_input(self, include_llm: bool = True) -> ReviewInput:
        return ReviewInput.from_dict(
            {
                "id": self.id,
                "title": self.title,
                "abstract": self.abstract,
                "review_text": self.review_text,
                "reviewer_openalex_id": self.reviewer_openalex_id,
                "include_llm": include_llm,
            }
        )


def iter_jsonl(path: str | Path) -> Iterator[tuple[int, object]]:
    """Yield (line_number, parsed object) per non-blank line.

    Parse failures yield (line_number, InvalidInput) instead of raising,
    so callers can stream past bad lines and count them.
    """
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except ValueError as exc:
                yield lineno, InvalidInput("bad_json", f"line {lineno}: {exc}")


def load_annotated(path: str | Path, min_records: int = MIN_TRAINING_RECORDS) -> list[AnnotatedReview]:
    """Strictly load an annotated corpus; any bad line is an error."""
    records = []
    for lineno, obj in iter_jsonl(path):
        if isinstance(obj, InvalidInput):
            raise obj
        try:
            records.append(AnnotatedReview.from_dict(obj))
        except InvalidInput as exc:
            raise InvalidInput(exc.code, f"line {lineno}: {exc.message}") from exc
    if len(records) < min_records:
        raise TooFewSamples(
            f"annotated corpus has {len(records)} records; at least {min_records} required"
        )
    return records


def write_jsonl(path: str | Path, records: Iterator[dict]) -> int:
    """Write dicts one per line with sorted keys; returns line count."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
            count += 1
    return count


def corpus_fingerprint(path: str | Path) -> str:
    """Stable content hash of a corpus file (for training provenance)."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()[:16]
