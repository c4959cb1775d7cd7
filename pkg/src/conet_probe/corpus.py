"""Corpus ingestion: manifests, tokenization, truncation, stopword
filtering, and seeded word-level shuffles.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from importlib import resources
from itertools import groupby
from pathlib import Path

from .rng import SplitMix64, derive_state

DEFAULT_REPLICAS = 10


class ManifestError(ValueError):
    """Malformed or inconsistent corpus manifest."""


class DocumentTooShortError(ValueError):
    """Document has too few tokens for the requested operation."""


class StopwordListMissingError(LookupError):
    """Stopword filtering requested for a language without a list."""

    def __init__(self, language: str):
        super().__init__(
            f"no stopword list configured for language {language!r}"
        )
        self.language = language


@dataclass(frozen=True)
class ManifestEntry:
    text_id: str
    path: Path
    language: str
    dataset_tag: str


@dataclass(frozen=True)
class Manifest:
    entries: tuple[ManifestEntry, ...]
    path: Path


@dataclass(frozen=True)
class Document:
    """A pre-processed token sequence.

    ``requested_size`` is set when a truncation asked for more tokens
    than the document had; such documents are flagged, not dropped.
    """

    text_id: str
    language: str
    tokens: tuple[str, ...]
    stopwords_filtered: bool = False
    requested_size: int | None = None

    @property
    def size(self) -> int:
        return len(self.tokens)

    @property
    def is_short(self) -> bool:
        return self.requested_size is not None


@dataclass(frozen=True)
class ShuffleSet:
    original: Document
    replicas: tuple[Document, ...]
    seed: int


def load_manifest(path: str | Path) -> Manifest:
    """Load and validate a corpus manifest.

    The manifest is UTF-8 CSV with header
    ``text_id,path,language,dataset_tag``.  Relative paths resolve
    against the manifest's directory.  Every referenced file must exist
    and text_id values must be unique; violations are reported with
    line numbers.
    """
    path = Path(path)
    expected = ["text_id", "path", "language", "dataset_tag"]
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ManifestError(f"{path}: empty manifest")
    if rows[0] != expected:
        raise ManifestError(
            f"{path}:1: bad header {rows[0]!r}, expected {expected!r}"
        )
    if len(rows) == 1:
        raise ManifestError(f"{path}: empty manifest (header only)")

    entries = []
    seen: dict[str, int] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 4:
            raise ManifestError(
                f"{path}:{lineno}: expected 4 fields, got {len(row)}"
            )
        text_id, raw_path, language, dataset_tag = (f.strip() for f in row)
        if not text_id or not raw_path or not language:
            raise ManifestError(
                f"{path}:{lineno}: text_id, path and language must be non-empty"
            )
        if text_id in seen:
            raise ManifestError(
                f"{path}:{lineno}: duplicate text_id {text_id!r} "
                f"(first seen at line {seen[text_id]})"
            )
        seen[text_id] = lineno
        resolved = (path.parent / raw_path).resolve()
        if not resolved.is_file():
            raise ManifestError(
                f"{path}:{lineno}: text file not found: {resolved}"
            )
        entries.append(ManifestEntry(text_id, resolved, language, dataset_tag))
    return Manifest(entries=tuple(entries), path=path)


def tokenize(raw: str) -> list[str]:
    """Split text into maximal runs of Unicode letters, case-folded.

    Digits, punctuation, symbols and whitespace all act as separators,
    so every token satisfies ``str.isalpha``.
    """
    return [
        "".join(run).casefold()
        for is_letter, run in groupby(raw, key=str.isalpha)
        if is_letter
    ]


def load_stopwords(language: str, override_dir: str | Path | None = None) -> frozenset[str]:
    """Load the stopword list for a language code.

    Looks for ``<language>.txt`` in ``override_dir`` first, then in the
    lists shipped with the package (currently English only).  Files are
    UTF-8, one lowercase word per line; ``#`` starts a comment.
    """
    text = None
    if override_dir is not None:
        candidate = Path(override_dir) / f"{language}.txt"
        if candidate.is_file():
            text = candidate.read_text(encoding="utf-8")
    if text is None:
        packaged = resources.files("conet_probe").joinpath(
            f"data/stopwords/{language}.txt"
        )
        if packaged.is_file():
            text = packaged.read_text(encoding="utf-8")
    if text is None:
        raise StopwordListMissingError(language)
    words = set()
    for line in text.splitlines():
        word = line.split("#", 1)[0].strip()
        if word:
            words.add(word)
    return frozenset(words)


def remove_stopwords(doc: Document, stopwords: frozenset[str]) -> Document:
    """Drop stopword tokens from a document, preserving order."""
    kept = tuple(t for t in doc.tokens if t not in stopwords)
    return replace(doc, tokens=kept, stopwords_filtered=True)


def preprocess(
    raw: str,
    language: str,
    filter_stopwords: bool = False,
    *,
    text_id: str = "",
    stopword_dir: str | Path | None = None,
) -> Document:
    """Turn raw text into a Document of lowercase letter-run tokens."""
    doc = Document(text_id=text_id, language=language, tokens=tuple(tokenize(raw)))
    if filter_stopwords:
        doc = remove_stopwords(doc, load_stopwords(language, stopword_dir))
    return doc


def truncate(doc: Document, n: int) -> Document:
    """Keep the first ``min(n, doc.size)`` tokens.

    Documents shorter than ``n`` are returned whole with
    ``requested_size`` recording the shortfall.
    """
    if n < 1:
        raise ValueError(f"truncation size must be >= 1, got {n}")
    if doc.size < n:
        return replace(doc, requested_size=n)
    return replace(doc, tokens=doc.tokens[:n], requested_size=None)


def make_shuffles(doc: Document, count: int = DEFAULT_REPLICAS, seed: int = 0) -> ShuffleSet:
    """Generate ``count`` word-level shuffles of a document.

    Replica ``i`` is a Fisher-Yates permutation driven by the
    SplitMix64 stream with state
    ``derive_state("shuffle", seed, doc.text_id, i)``, so regenerating
    with the same seed is bit-identical on any platform.
    """
    if count < 2:
        raise ValueError(f"replica count must be >= 2, got {count}")
    if doc.size < 2:
        raise DocumentTooShortError(
            f"{doc.text_id or 'document'}: need at least 2 tokens to shuffle, "
            f"got {doc.size}"
        )
    replicas = []
    for i in range(count):
        tokens = list(doc.tokens)
        SplitMix64(derive_state("shuffle", seed, doc.text_id, i)).shuffle(tokens)
        replicas.append(replace(doc, tokens=tuple(tokens)))
    return ShuffleSet(original=doc, replicas=tuple(replicas), seed=seed)
