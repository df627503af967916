"""Orchestration: one review in, one quality report out.

The engine wires the metric computers, the rubric judge, the reviewer
profiler, and the trained estimator together with partial-degradation
semantics: optional stages that fail are replaced by error objects while
the rest of the report is still produced.
"""

import threading
import time
from dataclasses import dataclass, field

from . import judge as judge_mod
from . import models as models_mod
from .errors import (
    BackendError,
    InvalidAuthorId,
    InvalidInput,
    MalformedJudgment,
    MalformedResponse,
    ModelNotLoaded,
    NetworkError,
    NotFound,
    RateLimited,
)
from .features import SCHEMA_VERSION, assemble_features
from .lexicons import LexiconSet, default_lexicons
from .openalex import ReviewerProfile, normalize_author_id
from .textmetrics import StructuredMetrics, compute_structured_metrics, tokenize

ENGINE_VERSION = "0.1.0"

MAX_REVIEW_CHARS = 1_000_000


@dataclass(frozen=True)
class ReviewInput:
    """One review submitted for analysis."""

    title: str
    abstract: str
    review_text: str
    reviewer_openalex_id: str | None = None
    include_llm: bool = True
    include_profile: bool | None = None  # None: true iff an ID was supplied
    require_estimate: bool = False
    id: str | None = None

    def wants_profile(self) -> bool:
        if self.include_profile is None:
            return self.reviewer_openalex_id is not None
        return self.include_profile and self.reviewer_openalex_id is not None

    @classmethod
    def from_dict(cls, obj) -> "ReviewInput":
        """Build and validate a ReviewInput from a parsed JSON object."""
        if not isinstance(obj, dict):
            raise InvalidInput("not_an_object", "review input must be a JSON object")
        for key in ("title", "abstract", "review_text"):
            if key in obj and not isinstance(obj[key], str):
                raise InvalidInput("bad_field_type", f"field {key!r} must be a string")
        for key in ("include_llm", "require_estimate"):
            if key in obj and not isinstance(obj[key], bool):
                raise InvalidInput("bad_field_type", f"field {key!r} must be a boolean")
        if "include_profile" in obj and not isinstance(obj["include_profile"], (bool, type(None))):
            raise InvalidInput("bad_field_type", "field 'include_profile' must be a boolean")
        reviewer_id = obj.get("reviewer_openalex_id")
        if reviewer_id is not None and not isinstance(reviewer_id, str):
            raise InvalidInput("bad_field_type", "field 'reviewer_openalex_id' must be a string")
        record_id = obj.get("id")
        if record_id is not None and not isinstance(record_id, str):
            record_id = str(record_id)
        review = cls(
            title=obj.get("title", ""),
            abstract=obj.get("abstract", ""),
            review_text=obj.get("review_text", ""),
            reviewer_openalex_id=reviewer_id,
            include_llm=obj.get("include_llm", True),
            include_profile=obj.get("include_profile"),
            require_estimate=obj.get("require_estimate", False),
            id=record_id,
        )
        review.validate()
        return review

    def validate(self) -> None:
        if len(self.review_text) > MAX_REVIEW_CHARS:
            raise InvalidInput(
                "review_too_large",
                f"review_text exceeds {MAX_REVIEW_CHARS} characters",
            )
        if not tokenize(self.review_text).tokens:
            raise InvalidInput("empty_review", "review_text contains no words")
        if not (self.title.strip() or self.abstract.strip()):
            raise InvalidInput(
                "empty_paper_context", "title and abstract are both empty"
            )
        if self.reviewer_openalex_id is not None:
            try:
                normalize_author_id(self.reviewer_openalex_id)
            except InvalidAuthorId as exc:
                raise InvalidInput("bad_reviewer_id", str(exc)) from exc

    def paper_context(self) -> str:
        return " ".join(part for part in (self.title, self.abstract) if part.strip())


@dataclass(frozen=True)
class SectionError:
    """Replacement for an optional report section that failed."""

    code: str
    detail: str

    def to_dict(self) -> dict:
        return {"error": self.code, "detail": self.detail}


def _error_code(exc: Exception) -> str:
    if isinstance(exc, NotFound):
        return "author_not_found"
    if isinstance(exc, RateLimited):
        return "rate_limited"
    if isinstance(exc, NetworkError):
        return "upstream_unreachable"
    if isinstance(exc, MalformedResponse):
        return "upstream_malformed"
    if isinstance(exc, MalformedJudgment):
        return "judgment_invalid"
    if isinstance(exc, BackendError):
        return "backend_error"
    return "internal_error"


@dataclass
class QualityReport:
    """Full analysis output for one review."""

    structured: StructuredMetrics
    rubric: object = None  # RubricScores | SectionError | None
    profile: object = None  # ReviewerProfile | SectionError | None
    overall_estimate: float | None = None
    degraded: bool = False
    engine_version: str = ENGINE_VERSION
    schema_version: str = SCHEMA_VERSION
    lexicon_hash: str = ""
    prompt_version: str = ""
    id: str | None = None
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def section(value):
            if value is None:
                return None
            return value.to_dict()

        return {
            "id": self.id,
            "structured": self.structured.to_dict(),
            "rubric": section(self.rubric),
            "profile": section(self.profile),
            "overall_estimate": self.overall_estimate,
            "degraded": self.degraded,
            "engine_version": self.engine_version,
            "schema_version": self.schema_version,
            "lexicon_hash": self.lexicon_hash,
            "prompt_version": self.prompt_version,
            "timings": dict(self.timings),
        }


class AnalysisEngine:
    """Analyze reviews with whatever backends are configured.

    Thread-safe: all configuration is read-only after construction except
    the current model, which sits behind a lock and can be swapped while
    requests are in flight.
    """

    def __init__(
        self,
        judge_backend=None,
        openalex_client=None,
        embedding_backend=None,
        rubric: judge_mod.Rubric | None = None,
        model: models_mod.TrainedModel | None = None,
        lexicons: LexiconSet | None = None,
    ):
        self.judge_backend = judge_backend
        self.openalex_client = openalex_client
        self.embedding_backend = embedding_backend
        self.rubric = rubric or judge_mod.default_rubric()
        self.lexicons = lexicons or default_lexicons()
        self._model = model
        self._model_lock = threading.Lock()

    @property
    def model(self) -> models_mod.TrainedModel | None:
        with self._model_lock:
            return self._model

    def set_model(self, model: models_mod.TrainedModel | None) -> None:
        with self._model_lock:
            self._model = model

    def analyze(self, review: ReviewInput) -> QualityReport:
        """Produce a QualityReport; raises InvalidInput / ModelNotLoaded only."""
        review.validate()
        model = self.model
        if review.require_estimate and model is None:
            raise ModelNotLoaded("no estimator model is loaded")

        timings: dict[str, float] = {}
        degraded = False

        t0 = time.perf_counter()
        structured = compute_structured_metrics(
            review.review_text,
            review.paper_context(),
            backend=self.embedding_backend,
            lexicons=self.lexicons,
        )
        timings["structured_ms"] = (time.perf_counter() - t0) * 1000.0

        rubric_section = None
        if review.include_llm:
            t0 = time.perf_counter()
            if self.judge_backend is None:
                rubric_section = SectionError(
                    "judge_not_configured", "no judge backend is configured"
                )
                degraded = True
            else:
                try:
                    rubric_section = judge_mod.judge(
                        review, self.judge_backend, rubric=self.rubric
                    )
                except (BackendError, MalformedJudgment, MalformedResponse) as exc:
                    rubric_section = SectionError(_error_code(exc), str(exc))
                    degraded = True
            timings["rubric_ms"] = (time.perf_counter() - t0) * 1000.0

        profile_section = None
        if review.wants_profile():
            t0 = time.perf_counter()
            if self.openalex_client is None:
                profile_section = SectionError(
                    "profile_not_configured", "no scholarly-metadata client is configured"
                )
                degraded = True
            else:
                try:
                    profile_section = self.openalex_client.get_profile(
                        review.reviewer_openalex_id,
                        review.paper_context(),
                        backend=self.embedding_backend,
                    )
                except (NotFound, RateLimited, BackendError, MalformedResponse) as exc:
                    profile_section = SectionError(_error_code(exc), str(exc))
                    degraded = True
            timings["profile_ms"] = (time.perf_counter() - t0) * 1000.0

        overall = None
        if model is not None and isinstance(rubric_section, judge_mod.RubricScores):
            profile = profile_section if isinstance(profile_section, ReviewerProfile) else None
            t0 = time.perf_counter()
            fv = assemble_features(structured, rubric_section, profile)
            overall = models_mod.predict(model, fv)
            timings["estimate_ms"] = (time.perf_counter() - t0) * 1000.0

        return QualityReport(
            structured=structured,
            rubric=rubric_section,
            profile=profile_section,
            overall_estimate=overall,
            degraded=degraded,
            lexicon_hash=self.lexicons.version_hash,
            prompt_version=self.rubric.prompt_version,
            id=review.id,
            timings=timings,
        )
