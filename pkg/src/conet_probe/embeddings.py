"""Word vector tables: loading the plain-text vector format, cosine
similarity queries, and a deterministic synthetic source for tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .rng import derive_state, uniform_block

DEFAULT_DIM = 300


class EmbeddingFormatError(ValueError):
    """Word-vector file violates the expected text format."""


@dataclass
class EmbeddingTable:
    """Immutable word -> dense vector map with cosine queries.

    Rows with zero norm are kept in the table but treated as absent by
    ``cosine``: the similarity of a zero vector is undefined, and
    reporting 0 would fabricate dissimilarity.
    """

    dim: int
    words: tuple[str, ...]
    matrix: np.ndarray  # shape (len(words), dim)
    source_id: str
    _index: dict[str, int] = field(init=False, repr=False)
    _unit: np.ndarray = field(init=False, repr=False)
    _has_norm: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if len(self.words) != len(set(self.words)):
            raise ValueError("duplicate words in embedding table")
        if self.matrix.shape != (len(self.words), self.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{len(self.words)} words x dim {self.dim}"
            )
        self._index = {w: i for i, w in enumerate(self.words)}
        norms = np.linalg.norm(self.matrix, axis=1)
        self._has_norm = norms > 0.0
        safe = np.where(self._has_norm, norms, 1.0)
        self._unit = self.matrix / safe[:, None]

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def __len__(self) -> int:
        return len(self.words)

    def vector(self, word: str) -> np.ndarray | None:
        i = self._index.get(word)
        return None if i is None else self.matrix[i]

    def unit_rows(self, words) -> tuple[np.ndarray, np.ndarray]:
        """Unit vectors for ``words`` plus a validity mask.

        Missing and zero-norm words get a zero row and a False mask
        entry.
        """
        out = np.zeros((len(words), self.dim))
        ok = np.zeros(len(words), dtype=bool)
        for row, word in enumerate(words):
            i = self._index.get(word)
            if i is not None and self._has_norm[i]:
                out[row] = self._unit[i]
                ok[row] = True
        return out, ok

    def subset(self, words) -> "EmbeddingTable":
        """Table restricted to the given words (absent ones dropped)."""
        kept = [w for w in dict.fromkeys(words) if w in self._index]
        rows = [self._index[w] for w in kept]
        return EmbeddingTable(
            dim=self.dim,
            words=tuple(kept),
            matrix=self.matrix[rows] if rows else np.zeros((0, self.dim)),
            source_id=self.source_id,
        )


def cosine(table: EmbeddingTable, a: str, b: str) -> float | None:
    """Cosine similarity of two words, or None when undefined.

    Undefined means either word is missing from the table or has a
    zero-norm vector.  Absence is a value here, not an error.
    """
    ia = table._index.get(a)
    ib = table._index.get(b)
    if ia is None or ib is None:
        return None
    if not (table._has_norm[ia] and table._has_norm[ib]):
        return None
    return float(np.dot(table._unit[ia], table._unit[ib]))


def load_vectors(
    path: str | Path,
    restrict_to: set[str] | frozenset[str] | None = None,
) -> EmbeddingTable:
    """Load a plain-text word-vector file.

    Format: an optional first line ``<count> <dim>``; every other line
    is ``word v1 v2 ... vdim``, space-separated, UTF-8.  When
    ``restrict_to`` is given only those words are kept, which is the
    memory-friendly path for multi-gigabyte pretrained files.  A word
    repeated in the file keeps its first vector.
    """
    path = Path(path)
    words: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    dim: int | None = None

    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.strip():
            raise EmbeddingFormatError(f"{path}: empty vector file")
        parts = first.split()
        start_line = 2
        if len(parts) == 2 and all(_is_int(p) for p in parts):
            dim = int(parts[1])
            if dim < 1:
                raise EmbeddingFormatError(
                    f"{path}:1: header dimension must be >= 1, got {dim}"
                )
        else:
            _consume_row(parts, 1, path, words, rows, seen, restrict_to, dim)
            if rows:
                dim = rows[0].shape[0]
            elif len(parts) >= 2:
                dim = len(parts) - 1
        for lineno, line in enumerate(fh, start=start_line):
            parts = line.split()
            if not parts:
                continue
            new_dim = _consume_row(
                parts, lineno, path, words, rows, seen, restrict_to, dim
            )
            if dim is None:
                dim = new_dim

    if dim is None:
        raise EmbeddingFormatError(f"{path}: empty vector file")
    matrix = np.vstack(rows) if rows else np.zeros((0, dim))
    return EmbeddingTable(
        dim=dim, words=tuple(words), matrix=matrix, source_id=str(path)
    )


def _is_int(token: str) -> bool:
    try:
        int(token)
        return True
    except ValueError:
        return False


def _consume_row(parts, lineno, path, words, rows, seen, restrict_to, dim):
    if len(parts) < 2:
        raise EmbeddingFormatError(
            f"{path}:{lineno}: expected 'word v1 ... vdim', got {len(parts)} fields"
        )
    word = parts[0]
    expected = dim if dim is not None else len(parts) - 1
    if len(parts) - 1 != expected:
        raise EmbeddingFormatError(
            f"{path}:{lineno}: expected {expected} values, got {len(parts) - 1}"
        )
    if word in seen or (restrict_to is not None and word not in restrict_to):
        return expected
    try:
        vec = np.array([float(v) for v in parts[1:]])
    except ValueError as exc:
        raise EmbeddingFormatError(f"{path}:{lineno}: {exc}") from exc
    seen.add(word)
    words.append(word)
    rows.append(vec)
    return expected


def write_vectors(table: EmbeddingTable, path: str | Path) -> None:
    """Write a table back in the plain-text format (round-trip exact)."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table.words)} {table.dim}\n")
        for word, row in zip(table.words, table.matrix):
            values = " ".join(repr(float(v)) for v in row)
            fh.write(f"{word} {values}\n")


def synthetic_table(
    vocabulary, dim: int = DEFAULT_DIM, seed: int = 0
) -> EmbeddingTable:
    """Deterministic unit-norm vectors, a pure function of (word, dim, seed).

    Each coordinate is a sum of 12 SplitMix64 uniforms minus 6 (a
    near-Gaussian built from exact integer arithmetic), then the vector
    is normalized.  Word order in the table is sorted for determinism
    regardless of input container.
    """
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    words = tuple(sorted(set(vocabulary)))
    matrix = np.zeros((len(words), dim))
    for row, word in enumerate(words):
        state = derive_state("synthetic-embedding", seed, dim, word)
        u = uniform_block(state, 12 * dim).reshape(dim, 12)
        vec = u.sum(axis=1) - 6.0
        norm = float(np.linalg.norm(vec))
        if norm < 1e-15:  # unreachable in practice; keep the contract total
            vec = np.zeros(dim)
            vec[0] = 1.0
            norm = 1.0
        matrix[row] = vec / norm
    return EmbeddingTable(
        dim=dim, words=words, matrix=matrix, source_id=f"synthetic:{seed}"
    )
