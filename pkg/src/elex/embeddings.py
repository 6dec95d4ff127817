"""Immutable word-embedding tables and raw cosine similarity.

The on-disk EMBTXT format is the word2vec text layout: a ``<count> <dim>``
header followed by ``<word> <v1> ... <vdim>`` rows, UTF-8, LF endings.
Comment lines starting with ``#`` are permitted before the header only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError
from .lexicon import Lexicon

DEFAULT_DIM = 768


class EmbeddingTable:
    """Word -> d-dimensional vector store; read-only after construction.

    Words are kept in sorted order so every scan over the table is
    deterministic regardless of input file order.
    """

    def __init__(self, vectors: dict[str, np.ndarray], dim: int):
        self.dim = int(dim)
        words = sorted(vectors)
        self._index = {w: i for i, w in enumerate(words)}
        self._words = words
        mat = np.zeros((len(words), dim), dtype=np.float64)
        for w, i in self._index.items():
            v = np.asarray(vectors[w], dtype=np.float64)
            if v.shape != (dim,):
                raise ValueError(f"{w!r}: vector of length {v.shape}, want {dim}")
            mat[i] = v
        if mat.size:
            if not np.all(np.isfinite(mat)):
                raise ValueError("non-finite vector component")
            norms = np.linalg.norm(mat, axis=1)
            if np.any(norms == 0.0):
                bad = [w for w, i in self._index.items() if norms[i] == 0.0]
                raise ValueError(f"zero-norm vectors: {sorted(bad)[:5]}")
        mat.setflags(write=False)
        self._matrix = mat

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    @property
    def words(self) -> list[str]:
        return list(self._words)

    def vector(self, word: str) -> np.ndarray:
        return self._matrix[self._index[word]]

    def matrix(self, words) -> np.ndarray:
        """Rows for ``words`` in the given order (read-only view copies)."""
        idx = [self._index[w] for w in words]
        return self._matrix[idx]

    def unit_matrix(self, words) -> np.ndarray:
        m = self.matrix(words)
        return m / np.linalg.norm(m, axis=1, keepdims=True)


def load_embeddings(path) -> EmbeddingTable:
    """Parse an EMBTXT file, validating every row.

    Errors (wrong column count, non-finite values, zero-norm vectors, row
    count not matching the header) carry the offending line number.
    Duplicate words keep the last row, with a warning.
    """
    vectors: dict[str, np.ndarray] = {}
    count = dim = None
    rows = 0
    dups: set[str] = set()

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if count is None:
                if line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise FormatError(
                        "header must be '<count> <dim>'", path=path, line=lineno
                    )
                try:
                    count, dim = int(parts[0]), int(parts[1])
                except ValueError as exc:
                    raise FormatError(f"bad header: {exc}", path=path, line=lineno)
                if count < 0 or dim <= 0:
                    raise FormatError(
                        f"bad header values {count} {dim}", path=path, line=lineno
                    )
                continue
            if not line:
                raise FormatError("blank line in vector block", path=path, line=lineno)
            parts = line.split(" ")
            if len(parts) != dim + 1:
                raise FormatError(
                    f"expected {dim + 1} fields, got {len(parts)}",
                    path=path,
                    line=lineno,
                )
            word = parts[0]
            if not word:
                raise FormatError("empty word", path=path, line=lineno)
            try:
                vec = np.asarray(parts[1:], dtype=np.float64)
            except ValueError as exc:
                raise FormatError(f"bad float: {exc}", path=path, line=lineno)
            if not np.all(np.isfinite(vec)):
                raise FormatError("non-finite component", path=path, line=lineno)
            if np.linalg.norm(vec) == 0.0:
                raise FormatError(f"zero-norm vector {word!r}", path=path, line=lineno)
            if word in vectors:
                dups.add(word)
            vectors[word] = vec
            rows += 1

    if count is None:
        raise FormatError("missing header", path=path)
    if rows != count:
        raise FormatError(f"header says {count} rows, file has {rows}", path=path)
    if dups:
        warnings.warn(
            f"{path}: {len(dups)} duplicate words, last row wins", stacklevel=2
        )
    return EmbeddingTable(vectors, dim)


def save_embeddings(table: EmbeddingTable, path, fmt: str = ".17g") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(table)} {table.dim}\n")
        for w in table.words:
            comps = " ".join(format(x, fmt) for x in table.vector(w))
            fh.write(f"{w} {comps}\n")


def cosine_similarity(u, v) -> float:
    """dot(u, v) / (|u||v|), clamped to [-1, 1] against rounding overshoot."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("zero-norm vector")
    return float(min(1.0, max(-1.0, float(np.dot(u, v)) / (nu * nv))))


@dataclass
class CoverageReport:
    """Words requested but absent from the embedding table."""

    missing: list[str]
    total: int

    @property
    def coverage_ratio(self) -> float:
        if self.total == 0:
            return 1.0
        return (self.total - len(self.missing)) / self.total

    def to_dict(self) -> dict:
        return {"missing": sorted(self.missing), "coverage_ratio": self.coverage_ratio}


def split_by_coverage(table: EmbeddingTable, words) -> tuple[list[str], CoverageReport]:
    """Sorted present words plus a report of the absent ones."""
    words = list(words)
    present = sorted(w for w in words if w in table)
    missing = sorted(set(w for w in words if w not in table))
    return present, CoverageReport(missing=missing, total=len(set(words)))


@dataclass
class SimilarityHistogram:
    """Per-emotion histogram of raw pairwise cosine similarity."""

    bins: int
    edges: np.ndarray
    counts: dict[str, np.ndarray]
    pair_counts: dict[str, int]
    coverage: CoverageReport = field(default=None)


def similarity_histogram(
    table: EmbeddingTable,
    lexicon: Lexicon,
    bins: int = 100,
    include_self: bool = True,
    chunk: int = 512,
) -> SimilarityHistogram:
    """Histogram cos(w, w') for each emotion over all lexicon word pairs.

    For emotion ``e``, ``w`` ranges over lexicon words flagged ``e`` and
    ``w'`` over all lexicon words; self pairs are counted iff
    ``include_self``. Bin edges are uniform over [-1, 1]. Lexicon words
    without an embedding are reported and excluded.
    """
    if bins <= 0:
        raise ValueError("bins must be positive")
    words, coverage = split_by_coverage(table, lexicon.words())
    unit = table.unit_matrix(words) if words else np.zeros((0, table.dim))
    pos = {w: i for i, w in enumerate(words)}
    edges = np.linspace(-1.0, 1.0, bins + 1)

    counts: dict[str, np.ndarray] = {}
    pair_counts: dict[str, int] = {}
    n = len(words)
    for emotion in lexicon.categories:
        rows = [pos[w] for w in lexicon.words_with(emotion) if w in pos]
        hist = np.zeros(bins, dtype=np.int64)
        for start in range(0, len(rows), chunk):
            block = rows[start : start + chunk]
            sims = np.clip(unit[block] @ unit.T, -1.0, 1.0)
            if not include_self:
                for j, r in enumerate(block):
                    sims[j, r] = np.nan
                vals = sims[~np.isnan(sims)]
            else:
                vals = sims.ravel()
            h, _ = np.histogram(vals, bins=bins, range=(-1.0, 1.0))
            hist += h
        counts[emotion] = hist
        pair_counts[emotion] = len(rows) * n - (0 if include_self else len(rows))
    return SimilarityHistogram(
        bins=bins, edges=edges, counts=counts, pair_counts=pair_counts,
        coverage=coverage,
    )
