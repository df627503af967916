"""Rubric-guided scoring of a review via a pluggable chat-completion backend.

One request scores all 13 dimensions. The prompt is deterministic given
the review and rubric, replies are parsed as strict JSON (tolerating
surrounding prose), and invalid replies trigger up to two corrective
re-prompts before the call fails.
"""

import hashlib
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Protocol

import requests

from .errors import (
    BackendError,
    EmptyText,
    MalformedJudgment,
    MalformedResponse,
    NetworkError,
    ScoreOutOfRange,
)

if TYPE_CHECKING:  # pragma: no cover
    from .engine import ReviewInput

# Canonical dimension order; prompts and feature vectors follow it.
ASPECT_KEYS = (
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
)

PROMPT_TEMPLATE_VERSION = "prompt-v1"

_ASPECT_HEADER_RE = re.compile(r"^## (\w+): ", re.MULTILINE)


@dataclass(frozen=True)
class RubricAspect:
    """One scoring dimension with its 1..5 anchor texts."""

    key: str
    name: str
    description: str
    anchors: dict[int, str]


@dataclass(frozen=True)
class Rubric:
    version: str
    aspects: tuple[RubricAspect, ...]

    @property
    def prompt_version(self) -> str:
        return f"rubric-{self.version}/{PROMPT_TEMPLATE_VERSION}"


def load_rubric(path: str | Path | None = None) -> Rubric:
    """Load and validate a rubric file (bundled v1 rubric if ``path`` is None)."""
    if path is None:
        raw = (resources.files("revqual") / "data" / "rubric_v1.json").read_text("utf-8")
    else:
        raw = Path(path).read_text("utf-8")
    doc = json.loads(raw)
    by_key = {}
    for entry in doc["aspects"]:
        anchors = {int(level): text for level, text in entry["anchors"].items()}
        if sorted(anchors) != [1, 2, 3, 4, 5]:
            raise ValueError(f"aspect {entry['key']!r} must define anchors for levels 1..5")
        by_key[entry["key"]] = RubricAspect(
            key=entry["key"], name=entry["name"], description=entry["description"], anchors=anchors
        )
    if set(by_key) != set(ASPECT_KEYS):
        raise ValueError(
            f"rubric must define exactly these aspects: {', '.join(ASPECT_KEYS)}"
        )
    aspects = tuple(by_key[k] for k in ASPECT_KEYS)
    return Rubric(version=doc["version"], aspects=aspects)


@lru_cache(maxsize=1)
def default_rubric() -> Rubric:
    return load_rubric(None)


@dataclass(frozen=True)
class RubricScores:
    """Validated per-dimension scores (and rationales) from one judge call."""

    scores: dict[str, int]
    rationales: dict[str, str]
    backend_id: str
    prompt_version: str
    attempts: int = 1

    def to_dict(self) -> dict:
        return {
            "scores": dict(self.scores),
            "rationales": dict(self.rationales),
            "backend_id": self.backend_id,
            "prompt_version": self.prompt_version,
            "attempts": self.attempts,
        }


class JudgeBackend(Protocol):
    """Chat-completion backend: messages in, reply text out."""

    id: str

    def complete(self, messages: list[dict], temperature: float = 0.0) -> str: ...


def _canonical_aspects(aspects) -> list[RubricAspect]:
    known = {k: i for i, k in enumerate(ASPECT_KEYS)}
    return sorted(aspects, key=lambda a: (known.get(a.key, len(known)), a.key))


def build_prompt(review: "ReviewInput", aspects) -> str:
    """Deterministic judging prompt for one review.

    Aspects are serialized in canonical key order regardless of input
    order; each aspect key appears exactly once, as a "## key:" header.
    """
    if not review.review_text.strip():
        raise EmptyText("review text is empty")
    ordered = _canonical_aspects(aspects)
    lines = [
        "You are an experienced journal editor assessing the quality of one peer review.",
        "Judge only the review text, using the paper title and abstract as context.",
        "",
        f"[prompt version: {PROMPT_TEMPLATE_VERSION}]",
        "",
        "=== Paper title ===",
        review.title,
        "",
        "=== Paper abstract ===",
        review.abstract,
        "",
        "=== Review under assessment ===",
        review.review_text,
        "",
        "=== Scoring dimensions ===",
        "Rate the review on every dimension below with an integer from 1 to 5,",
        "using the listed anchors.",
        "",
    ]
    for aspect in ordered:
        lines.append(f"## {aspect.key}: {aspect.name}")
        lines.append(aspect.description)
        for level in range(1, 6):
            lines.append(f"  {level}: {aspect.anchors[level]}")
        lines.append("")
    lines += [
        "=== Output format ===",
        "Reply with a single JSON object and nothing else. It must contain one",
        "entry per dimension header above, keyed by the header's dimension key:",
        '  {"<dimension_key>": {"score": <integer 1-5>, "rationale": "<one short sentence>"}}',
    ]
    return "\n".join(lines)


def extract_json_object(text: str) -> dict | None:
    """First balanced JSON object in ``text``, or None."""
    decoder = json.JSONDecoder()
    for start in range(len(text)):
        if text[start] != "{":
            continue
        try:
            obj, _ = decoder.raw_decode(text, start)
        except ValueError:
            continue
        if isinstance(obj, dict):
            return obj
    return None


def _validate_reply(reply: str, keys: tuple[str, ...]):
    """Returns (scores, rationales) or raises ValueError tagged with a failure kind."""
    obj = extract_json_object(reply)
    if obj is None:
        raise ValueError("parse: reply contains no JSON object")
    scores: dict[str, int] = {}
    rationales: dict[str, str] = {}
    for key in keys:
        if key not in obj:
            raise ValueError(f"missing: no entry for dimension {key!r}")
        entry = obj[key]
        if isinstance(entry, dict):
            raw_score = entry.get("score")
            rationale = entry.get("rationale", "")
        else:
            raw_score, rationale = entry, ""
        if isinstance(raw_score, bool) or not isinstance(raw_score, (int, float)):
            raise ValueError(f"parse: score for {key!r} is not a number")
        if isinstance(raw_score, float):
            if not raw_score.is_integer():
                raise ValueError(f"parse: score for {key!r} is not an integer")
            raw_score = int(raw_score)
        if not 1 <= raw_score <= 5:
            raise ValueError(f"range: score {raw_score} for {key!r} outside 1..5")
        scores[key] = int(raw_score)
        rationales[key] = str(rationale) if rationale is not None else ""
    return scores, rationales


def judge(
    review: "ReviewInput",
    backend: JudgeBackend,
    rubric: Rubric | None = None,
    max_retries: int = 2,
) -> RubricScores:
    """Score ``review`` on all rubric dimensions through ``backend``.

    Invalid replies (unparsable, missing keys, out-of-range scores) are
    retried up to ``max_retries`` times with an error-correction message
    appended; the final failure kind decides the raised error.
    """
    rub = rubric or default_rubric()
    prompt = build_prompt(review, rub.aspects)
    keys = tuple(a.key for a in _canonical_aspects(rub.aspects))
    messages = [{"role": "user", "content": prompt}]

    last_error = ""
    for attempt in range(1, max_retries + 2):
        reply = backend.complete(messages, temperature=0.0)
        try:
            scores, rationales = _validate_reply(reply, keys)
        except ValueError as exc:
            last_error = str(exc)
            messages = messages + [
                {"role": "assistant", "content": reply},
                {
                    "role": "user",
                    "content": (
                        f"Your previous reply was invalid ({last_error}). "
                        "Reply again with ONLY the required JSON object: one entry per "
                        "dimension key, each with an integer score from 1 to 5."
                    ),
                },
            ]
            continue
        return RubricScores(
            scores=scores,
            rationales=rationales,
            backend_id=backend.id,
            prompt_version=rub.prompt_version,
            attempts=attempt,
        )
    if last_error.startswith("range:"):
        raise ScoreOutOfRange(f"judge failed after {max_retries + 1} attempts: {last_error}")
    raise MalformedJudgment(f"judge failed after {max_retries + 1} attempts: {last_error}")


class MockJudgeBackend:
    """Deterministic offline judge: scores are a hash of (dimension, prompt).

    Byte-deterministic across platforms, so golden end-to-end outputs are
    stable. Parses the dimension keys out of the prompt itself.
    """

    id = "mock"

    def __init__(self):
        self.calls = 0

    def complete(self, messages: list[dict], temperature: float = 0.0) -> str:
        self.calls += 1
        prompt = messages[0]["content"]
        keys = _ASPECT_HEADER_RE.findall(prompt)
        reply = {}
        for key in keys:
            digest = hashlib.sha256(f"{key}|{prompt}".encode("utf-8")).hexdigest()
            score = 1 + int(digest[:8], 16) % 5
            reply[key] = {"score": score, "rationale": f"mock rationale for {key}"}
        return json.dumps(reply, sort_keys=True)


class HttpJudgeBackend:
    """Chat-completion backend in the de-facto standard HTTP JSON shape."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        timeout: float = 120.0,
        seed: int | None = None,
        session=None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self.seed = seed
        self.session = session or requests.Session()
        self.id = f"openai-compat:{model}"

    def complete(self, messages: list[dict], temperature: float = 0.0) -> str:
        payload: dict = {"model": self.model, "messages": messages, "temperature": temperature}
        if self.seed is not None:
            payload["seed"] = self.seed
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = self.session.post(
                f"{self.endpoint}/chat/completions",
                json=payload,
                headers=headers,
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise NetworkError(f"judge backend unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise BackendError(f"judge backend returned HTTP {resp.status_code}")
        try:
            body = resp.json()
            return body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"judge backend reply malformed: {exc}") from exc
