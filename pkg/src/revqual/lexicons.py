"""Loading of the bundled (or user-supplied) lexicon files.

Every lexicon is a UTF-8 text file with one term or n-gram per line;
blank lines and lines starting with '#' are ignored. The set of files is
fixed: hedges, polite, impolite, positive, negative, stopwords. A version
hash over the raw file bytes is stamped into every report so scores are
traceable to the exact word lists that produced them.
"""

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

LEXICON_FILES = (
    "hedges.txt",
    "polite.txt",
    "impolite.txt",
    "positive.txt",
    "negative.txt",
    "stopwords.txt",
)

# Politeness markers may span up to this many tokens.
MAX_NGRAM = 3


def _parse_lines(text: str) -> list[str]:
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        entries.append(" ".join(line.lower().split()))
    return entries


@dataclass(frozen=True)
class LexiconSet:
    """Immutable bundle of all lexicons plus their version hash."""

    hedges: frozenset[str]
    polite: tuple[tuple[str, ...], ...]
    impolite: tuple[tuple[str, ...], ...]
    positive: frozenset[str]
    negative: frozenset[str]
    stopwords: frozenset[str]
    version_hash: str


def _read_files(directory: Path | None) -> dict[str, bytes]:
    raw = {}
    for name in LEXICON_FILES:
        if directory is not None:
            raw[name] = (directory / name).read_bytes()
        else:
            raw[name] = (resources.files("revqual") / "data" / name).read_bytes()
    return raw


def _ngrams(entries: list[str]) -> tuple[tuple[str, ...], ...]:
    grams = []
    for entry in entries:
        parts = tuple(entry.split())
        if len(parts) > MAX_NGRAM:
            raise ValueError(f"lexicon entry longer than {MAX_NGRAM} tokens: {entry!r}")
        grams.append(parts)
    return tuple(grams)


def load_lexicons(directory: str | Path | None = None) -> LexiconSet:
    """Load all lexicon files from ``directory`` (bundled defaults if None)."""
    directory = Path(directory) if directory is not None else None
    raw = _read_files(directory)

    digest = hashlib.sha256()
    for name in LEXICON_FILES:
        digest.update(name.encode())
        digest.update(b"\0")
        digest.update(raw[name])
    version_hash = digest.hexdigest()[:16]

    parsed = {name: _parse_lines(raw[name].decode("utf-8")) for name in LEXICON_FILES}
    return LexiconSet(
        hedges=frozenset(parsed["hedges.txt"]),
        polite=_ngrams(parsed["polite.txt"]),
        impolite=_ngrams(parsed["impolite.txt"]),
        positive=frozenset(parsed["positive.txt"]),
        negative=frozenset(parsed["negative.txt"]),
        stopwords=frozenset(parsed["stopwords.txt"]),
        version_hash=version_hash,
    )


@lru_cache(maxsize=1)
def default_lexicons() -> LexiconSet:
    """The bundled lexicons, loaded once per process."""
    return load_lexicons(None)
