"""Deterministic structured metrics over review text.

Everything here is a pure function of its inputs and the loaded lexicons:
same text in, bit-identical numbers out. The sentence splitter and the
syllable counter are intentionally naive heuristics; their exact rules are
documented on the functions so golden values stay stable.
"""

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .errors import EmptyText
from .lexicons import LexiconSet, default_lexicons

_WORD_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")
_SENTENCE_END = ".!?"
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")

# Manuscript-structure references: keyword followed by a numeric identifier
# (digits, optionally dotted and/or with a single letter suffix).
_STRUCTURE_RE = re.compile(
    r"(?:\bfigure|\bfig\.|\btable|\bsection|\bsec\.|§|\bequation|\beq\.|"
    r"\balgorithm|\bappendix|\bline|\bpage)\s*(\d+(?:\.\d+)*[a-z]?)\b",
    re.IGNORECASE,
)

_BRACKET_CITE_RE = re.compile(r"\[\d+(?:\s*[,–-]\s*\d+)*\]")
_PAREN_CITE_RE = re.compile(
    r"\(\s*[^\W\d_][\w'’-]*(?:\s+(?:and|&)\s+[^\W\d_][\w'’-]*)*"
    r"(?:\s+et\s+al\.?)?\s*,?\s+(?:19|20)\d{2}[a-z]?\s*\)",
    re.IGNORECASE,
)
_ARXIV_RE = re.compile(r"\barxiv:\s*[\w./-]+", re.IGNORECASE)
_DOI_RE = re.compile(r"\bdoi\b", re.IGNORECASE)
_ETAL_RE = re.compile(r"\bet\s+al\.?", re.IGNORECASE)


@dataclass(frozen=True)
class TokenizedText:
    """Word tokens plus sentence segments of one piece of text."""

    tokens: tuple[str, ...]
    sentences: tuple[str, ...]
    raw_length_chars: int


class EmbeddingBackend(Protocol):
    """Optional dense-embedding provider for the similarity metric."""

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        """Return one embedding row per input text."""
        ...


def tokenize(text: str) -> TokenizedText:
    """Split ``text`` into lowercased word tokens and naive sentences.

    Sentence boundaries are '.', '!' or '?' followed by whitespace or
    end-of-text; there is no abbreviation table, so "Eq. 3" splits. A
    segment only counts as a sentence if it contains at least one word
    token. Word tokens are maximal alphanumeric runs, allowing internal
    apostrophes and hyphens, lowercased.
    """
    tokens = tuple(m.group(0).lower() for m in _WORD_RE.finditer(text))

    sentences = []
    start = 0
    n = len(text)
    for i, ch in enumerate(text):
        if ch in _SENTENCE_END and (i + 1 == n or text[i + 1].isspace()):
            segment = text[start : i + 1].strip()
            if _WORD_RE.search(segment):
                sentences.append(segment)
            start = i + 1
    tail = text[start:].strip()
    if _WORD_RE.search(tail):
        sentences.append(tail)

    return TokenizedText(tokens=tokens, sentences=tuple(sentences), raw_length_chars=len(text))


def _require_tokens(t: TokenizedText) -> None:
    if not t.tokens:
        raise EmptyText("text has no word tokens")


def lexical_diversity(t: TokenizedText) -> float:
    """Type-token ratio: unique tokens over total tokens, in (0, 1]."""
    _require_tokens(t)
    return len(set(t.tokens)) / len(t.tokens)


def count_syllables(word: str) -> int:
    """Heuristic syllable count for one token.

    Counts maximal vowel groups (a, e, i, o, u, y), subtracts one for a
    silent trailing 'e' (unless the word ends in "le"), and clamps to a
    minimum of 1.
    """
    word = word.lower()
    groups = len(_VOWEL_GROUP_RE.findall(word))
    if word.endswith("e") and not word.endswith("le"):
        groups -= 1
    return max(1, groups)


def readability_fre(t: TokenizedText) -> float:
    """Flesch Reading Ease: 206.835 - 1.015*(words/sentences) - 84.6*(syllables/words)."""
    _require_tokens(t)
    if not t.sentences:
        raise EmptyText("text has no sentences")
    words = len(t.tokens)
    syllables = sum(count_syllables(w) for w in t.tokens)
    return 206.835 - 1.015 * (words / len(t.sentences)) - 84.6 * (syllables / words)


def hedge_density(t: TokenizedText, lexicons: LexiconSet | None = None) -> float:
    """Fraction of tokens that are hedge cues, in [0, 1]."""
    _require_tokens(t)
    lex = lexicons or default_lexicons()
    hits = sum(1 for tok in t.tokens if tok in lex.hedges)
    return hits / len(t.tokens)


def _ngram_hits(tokens: tuple[str, ...], entries: tuple[tuple[str, ...], ...]) -> int:
    hits = 0
    for entry in entries:
        n = len(entry)
        if n > len(tokens):
            continue
        for i in range(len(tokens) - n + 1):
            if tokens[i : i + n] == entry:
                hits += 1
    return hits


def politeness(t: TokenizedText, lexicons: LexiconSet | None = None) -> float:
    """(polite - impolite) / max(1, polite + impolite), matched on n-grams up to length 3."""
    _require_tokens(t)
    lex = lexicons or default_lexicons()
    p = _ngram_hits(t.tokens, lex.polite)
    n = _ngram_hits(t.tokens, lex.impolite)
    return (p - n) / max(1, p + n)


def sentiment(t: TokenizedText, lexicons: LexiconSet | None = None) -> float:
    """(positive - negative) / max(1, positive + negative) over lexicon token hits."""
    _require_tokens(t)
    lex = lexicons or default_lexicons()
    p = sum(1 for tok in t.tokens if tok in lex.positive)
    n = sum(1 for tok in t.tokens if tok in lex.negative)
    return (p - n) / max(1, p + n)


def _tf_cosine(a: tuple[str, ...], b: tuple[str, ...], stopwords: frozenset[str]) -> float:
    ca = Counter(tok for tok in a if tok not in stopwords)
    cb = Counter(tok for tok in b if tok not in stopwords)
    if not ca or not cb:
        return 0.0
    dot = sum(ca[tok] * cb[tok] for tok in ca.keys() & cb.keys())
    norm = math.sqrt(sum(v * v for v in ca.values())) * math.sqrt(sum(v * v for v in cb.values()))
    return min(1.0, dot / norm)


def paper_similarity(
    review: TokenizedText,
    paper_text: TokenizedText,
    backend: EmbeddingBackend | None = None,
    lexicons: LexiconSet | None = None,
) -> float:
    """Similarity between review and paper context, in [0, 1].

    With an embedding backend: cosine of the two embeddings rescaled from
    [-1, 1] to [0, 1]. Without one: cosine of term-frequency vectors over
    stopword-filtered tokens (0.0 when either side has no content terms).
    """
    _require_tokens(review)
    _require_tokens(paper_text)
    if backend is not None:
        vecs = np.asarray(backend.embed([" ".join(review.tokens), " ".join(paper_text.tokens)]), dtype=float)
        na, nb = np.linalg.norm(vecs[0]), np.linalg.norm(vecs[1])
        if na == 0.0 or nb == 0.0:
            return 0.0
        cos = float(np.dot(vecs[0], vecs[1]) / (na * nb))
        return min(1.0, max(0.0, (cos + 1.0) / 2.0))
    lex = lexicons or default_lexicons()
    return _tf_cosine(review.tokens, paper_text.tokens, lex.stopwords)


def structure_mentions(text: str) -> int:
    """Count references to figures, tables, sections, equations, etc. with identifiers."""
    return len(_STRUCTURE_RE.findall(text))


def citation_mentions(text: str) -> int:
    """Count citation-like patterns: [12], (Name, 2020), et al., arXiv ids, doi tokens.

    An "et al." inside an already-counted parenthetical citation is not
    counted a second time.
    """
    spans: list[tuple[int, int]] = []
    count = 0
    for pattern in (_BRACKET_CITE_RE, _PAREN_CITE_RE, _ARXIV_RE, _DOI_RE):
        for m in pattern.finditer(text):
            spans.append(m.span())
            count += 1
    for m in _ETAL_RE.finditer(text):
        s, e = m.span()
        if not any(s >= ps and e <= pe for ps, pe in spans):
            count += 1
    return count


def detect_questions(t: TokenizedText) -> tuple[int, bool]:
    """(number of sentences ending in '?', whether that number is positive)."""
    count = sum(1 for s in t.sentences if s.endswith("?"))
    return count, count > 0


@dataclass(frozen=True)
class StructuredMetrics:
    """The full structured-metric bundle for one review."""

    review_length_tokens: int
    hedge_density: float
    lexical_diversity: float
    readability_fre: float
    politeness: float
    sentiment: float
    paper_similarity: float
    structure_mentions: int
    citation_mentions: int
    question_count: int
    has_questions: bool

    def __post_init__(self):
        assert self.review_length_tokens > 0
        assert 0.0 <= self.hedge_density <= 1.0
        assert 0.0 < self.lexical_diversity <= 1.0
        assert -1.0 <= self.politeness <= 1.0
        assert -1.0 <= self.sentiment <= 1.0
        assert 0.0 <= self.paper_similarity <= 1.0
        assert self.structure_mentions >= 0 and self.citation_mentions >= 0
        assert self.question_count >= 0
        assert self.has_questions == (self.question_count > 0)

    def to_dict(self) -> dict:
        return {
            "review_length_tokens": self.review_length_tokens,
            "hedge_density": self.hedge_density,
            "lexical_diversity": self.lexical_diversity,
            "readability_fre": self.readability_fre,
            "politeness": self.politeness,
            "sentiment": self.sentiment,
            "paper_similarity": self.paper_similarity,
            "structure_mentions": self.structure_mentions,
            "citation_mentions": self.citation_mentions,
            "question_count": self.question_count,
            "has_questions": self.has_questions,
        }


def compute_structured_metrics(
    review: str,
    paper_title_abstract: str,
    backend: EmbeddingBackend | None = None,
    lexicons: LexiconSet | None = None,
) -> StructuredMetrics:
    """Assemble all structured metrics for one review.

    The review must contain at least one word token (EmptyText otherwise).
    If the paper context tokenizes to nothing, paper_similarity is 0.0
    rather than an error, since the remaining metrics are review-only.
    """
    lex = lexicons or default_lexicons()
    t = tokenize(review)
    _require_tokens(t)
    paper_t = tokenize(paper_title_abstract)
    if paper_t.tokens:
        similarity = paper_similarity(t, paper_t, backend=backend, lexicons=lex)
    else:
        similarity = 0.0
    q_count, q_present = detect_questions(t)
    return StructuredMetrics(
        review_length_tokens=len(t.tokens),
        hedge_density=hedge_density(t, lex),
        lexical_diversity=lexical_diversity(t),
        readability_fre=readability_fre(t),
        politeness=politeness(t, lex),
        sentiment=sentiment(t, lex),
        paper_similarity=similarity,
        structure_mentions=structure_mentions(review),
        citation_mentions=citation_mentions(review),
        question_count=q_count,
        has_questions=q_present,
    )
