"""Reviewer metadata from the OpenAlex web API and derived reviewer metrics.

Fetch and derivation are strictly separated: :func:`derive_profile` is a
pure function of already-fetched records plus an injected clock, so it is
testable offline. The client adds paging, retries with exponential
backoff, an in-memory TTL cache, and a concurrency cap.
"""

import hashlib
import re
import threading
import time as _time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import requests

from .errors import (
    InvalidAuthorId,
    MalformedResponse,
    NetworkError,
    NotFound,
    RateLimited,
)
from .textmetrics import EmbeddingBackend, paper_similarity, tokenize

_AUTHOR_ID_RE = re.compile(r"^A\d+$")
_AUTHOR_URL_RE = re.compile(r"^https?://openalex\.org/(A\d+)$")

ALIGNMENT_TOP_K = 5


def normalize_author_id(raw: str) -> str:
    """Canonical "A<digits>" form of an OpenAlex author ID (bare or URL)."""
    candidate = raw.strip()
    m = _AUTHOR_URL_RE.match(candidate)
    if m:
        return m.group(1)
    if _AUTHOR_ID_RE.match(candidate):
        return candidate
    raise InvalidAuthorId(f"not an OpenAlex author ID: {raw!r}")


def reconstruct_abstract(inverted_index: dict | None) -> str:
    """Rebuild abstract text from OpenAlex's inverted-index encoding."""
    if not inverted_index:
        return ""
    positions: list[tuple[int, str]] = []
    for word, indices in inverted_index.items():
        for idx in indices:
            positions.append((int(idx), word))
    positions.sort()
    return " ".join(word for _, word in positions)


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class HttpConfig:
    """Connection settings for the OpenAlex client."""

    base_url: str = "https://api.openalex.org"
    mailto: str | None = None
    timeout: float = 30.0
    works_cap: int = 100
    max_retries: int = 3
    backoff_base: float = 0.5
    concurrency: int = 4
    cache_ttl: float = 3600.0


@dataclass(frozen=True)
class ReviewerProfile:
    """Reviewer-based metrics derived from OpenAlex metadata."""

    openalex_id: str
    citation_count: int
    tenure_years: int
    topical_alignment: float | None
    works_sampled: int
    fetched_at: str

    def __post_init__(self):
        assert self.citation_count >= 0
        assert self.tenure_years >= 0
        if self.topical_alignment is not None:
            assert 0.0 <= self.topical_alignment <= 1.0
        assert self.works_sampled >= 0

    def to_dict(self) -> dict:
        return {
            "openalex_id": self.openalex_id,
            "citation_count": self.citation_count,
            "tenure_years": self.tenure_years,
            "topical_alignment": self.topical_alignment,
            "works_sampled": self.works_sampled,
            "fetched_at": self.fetched_at,
        }


def derive_profile(
    author_record: dict,
    works: list[dict],
    submission_text: str,
    backend: EmbeddingBackend | None = None,
    clock=None,
) -> ReviewerProfile:
    """Pure derivation of reviewer metrics from fetched records.

    tenure_years = current calendar year minus the earliest publication
    year over ``works`` (0 with no dated works). topical_alignment = mean
    of the top-5 similarities between ``submission_text`` and each work's
    title+abstract (mean of all when fewer than 5; 0.0 with no works or
    an empty submission).
    """
    now = clock() if clock is not None else _utc_now()
    citation_count = int(author_record.get("cited_by_count", 0) or 0)

    years = [int(w["publication_year"]) for w in works if w.get("publication_year")]
    tenure_years = max(0, now.year - min(years)) if years else 0

    alignment = 0.0
    submission = tokenize(submission_text)
    if works and submission.tokens:
        sims = []
        for w in works:
            text = " ".join(
                part
                for part in (w.get("title") or "", reconstruct_abstract(w.get("abstract_inverted_index")))
                if part
            )
            work_tokens = tokenize(text)
            if not work_tokens.tokens:
                continue
            sims.append(paper_similarity(submission, work_tokens, backend=backend))
        if sims:
            sims.sort(reverse=True)
            top = sims[:ALIGNMENT_TOP_K]
            alignment = sum(top) / len(top)

    return ReviewerProfile(
        openalex_id=normalize_author_id(author_record.get("id", "A0") or "A0"),
        citation_count=citation_count,
        tenure_years=tenure_years,
        topical_alignment=min(1.0, max(0.0, alignment)),
        works_sampled=len(works),
        fetched_at=now.strftime("%Y-%m-%dT%H:%M:%SZ"),
    )


class OpenAlexClient:
    """HTTP client for OpenAlex author records and work histories.

    Retries 429/5xx with exponential backoff, caps concurrent requests,
    and caches fetched records in memory for a configurable TTL. Nothing
    is ever written to disk.
    """

    def __init__(self, config: HttpConfig | None = None, session=None, clock=None, sleep=None):
        self.config = config or HttpConfig()
        self.session = session or requests.Session()
        self._clock = clock or _utc_now
        self._sleep = sleep or _time.sleep
        self._cache: dict[str, tuple[float, dict, list[dict]]] = {}
        self._lock = threading.Lock()
        self._gate = threading.BoundedSemaphore(max(1, self.config.concurrency))

    def _get(self, url: str, params: dict) -> dict:
        if self.config.mailto:
            params = {**params, "mailto": self.config.mailto}
        last_status = None
        retry_after = None
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                self._sleep(self.config.backoff_base * (2 ** (attempt - 1)))
            try:
                with self._gate:
                    resp = self.session.get(url, params=params, timeout=self.config.timeout)
            except requests.RequestException as exc:
                raise NetworkError(f"OpenAlex unreachable: {exc}") from exc
            if resp.status_code == 200:
                try:
                    body = resp.json()
                except ValueError as exc:
                    raise MalformedResponse(f"OpenAlex returned invalid JSON: {exc}") from exc
                if not isinstance(body, dict):
                    raise MalformedResponse("OpenAlex returned a non-object JSON body")
                return body
            if resp.status_code == 404:
                raise NotFound(f"OpenAlex has no record at {url}")
            last_status = resp.status_code
            if resp.status_code == 429:
                retry_after = resp.headers.get("Retry-After")
                continue
            if resp.status_code >= 500:
                continue
            raise MalformedResponse(f"OpenAlex returned unexpected HTTP {resp.status_code}")
        if last_status == 429:
            raise RateLimited("OpenAlex rate limit persisted across retries", retry_after=retry_after)
        raise NetworkError(f"OpenAlex kept failing with HTTP {last_status}")

    def fetch_author(self, openalex_id: str) -> tuple[dict, list[dict]]:
        """Author record plus up to works_cap most-recent works (cached)."""
        author_id = normalize_author_id(openalex_id)
        now = self._clock().timestamp()
        with self._lock:
            hit = self._cache.get(author_id)
            if hit and now - hit[0] <= self.config.cache_ttl:
                return hit[1], hit[2]

        base = self.config.base_url.rstrip("/")
        author = self._get(f"{base}/authors/{author_id}", {})

        works: list[dict] = []
        cursor = "*"
        per_page = min(200, max(1, self.config.works_cap))
        while cursor and len(works) < self.config.works_cap:
            page = self._get(
                f"{base}/works",
                {
                    "filter": f"author.id:{author_id}",
                    "sort": "publication_date:desc",
                    "per-page": per_page,
                    "cursor": cursor,
                    "select": "id,title,publication_year,abstract_inverted_index",
                },
            )
            results = page.get("results")
            if not isinstance(results, list):
                raise MalformedResponse("OpenAlex works page lacks a results array")
            works.extend(results)
            cursor = (page.get("meta") or {}).get("next_cursor")
        works = works[: self.config.works_cap]

        with self._lock:
            self._cache[author_id] = (now, author, works)
        return author, works

    def get_profile(
        self, openalex_id: str, submission_text: str, backend: EmbeddingBackend | None = None
    ) -> ReviewerProfile:
        author, works = self.fetch_author(openalex_id)
        return derive_profile(author, works, submission_text, backend=backend, clock=self._clock)


# Small word bank for synthesized mock works; all lowercase so the
# similarity tokenizer sees them unchanged.
_MOCK_VOCAB = (
    "graph", "neural", "networks", "optimization", "bayesian", "inference",
    "language", "models", "robust", "generalization", "sparse", "attention",
    "transfer", "learning", "causal", "estimation", "retrieval", "evaluation",
)


def _mock_clock() -> datetime:
    return datetime(2025, 1, 1, tzinfo=timezone.utc)


@dataclass
class MockOpenAlexClient:
    """Offline stand-in for :class:`OpenAlexClient`.

    With a fixture map, serves exactly those authors. Without one, it
    synthesizes a deterministic author record from the ID's hash, so batch
    audits run byte-identically with no network at all. The clock is
    pinned, keeping fetched_at and tenure_years stable.
    """

    authors: dict[str, tuple[dict, list[dict]]] | None = None
    clock: object = field(default=_mock_clock)
    calls: int = 0

    def fetch_author(self, openalex_id: str) -> tuple[dict, list[dict]]:
        author_id = normalize_author_id(openalex_id)
        self.calls += 1
        if self.authors is not None:
            if author_id not in self.authors:
                raise NotFound(f"mock OpenAlex has no author {author_id}")
            return self.authors[author_id]
        digest = hashlib.sha256(author_id.encode("utf-8")).digest()
        works = []
        for i in range(3):
            words = [_MOCK_VOCAB[digest[3 * i + j] % len(_MOCK_VOCAB)] for j in range(3)]
            works.append(
                {
                    "id": f"W{digest[i]}{i}",
                    "title": " ".join(words),
                    "publication_year": 2010 + digest[9 + i] % 14,
                    "abstract_inverted_index": None,
                }
            )
        author = {"id": author_id, "cited_by_count": 50 * (1 + digest[0] % 40)}
        return author, works

    def get_profile(
        self, openalex_id: str, submission_text: str, backend: EmbeddingBackend | None = None
    ) -> ReviewerProfile:
        author, works = self.fetch_author(openalex_id)
        return derive_profile(author, works, submission_text, backend=backend, clock=self.clock)
