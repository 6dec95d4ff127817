"""Threshold-based lexicon expansion, the theta sweep, and diagnostics.

For every candidate word the nearest lexicon word per emotion (by
calibrated similarity) is computed once; thresholding at any theta then
just filters that table, which is what makes sweep rows mutually
consistent and assignments nested across thresholds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from typing import TYPE_CHECKING

import numpy as np

from .calibrate import ClusterStats, NEGLIGIBLE_MASS
from .cluster import posterior, project
from .embeddings import CoverageReport, EmbeddingTable, split_by_coverage
from .errors import UsageError
from .lexicon import (
    EMOTIONS,
    SOURCE_EXPANDED,
    Lexicon,
    LexiconEntry,
    Support,
    normalize_word,
)
from .parallel import ordered_map

if TYPE_CHECKING:  # pragma: no cover
    from .modelio import ClusterModel

DEFAULT_THETA = 0.4
DEFAULT_GRID = (0.05, 0.95, 0.05)


@dataclass(frozen=True)
class Assignment:
    word: str
    emotion: str
    nearest: str
    sim: float


@dataclass
class ThresholdDiagnostics:
    theta: float
    total_new_assignments: int
    unique_words_expanded: int
    unique_patterns: int
    avg_hamming: float
    avg_hamming_norm: float
    overall_entropy: float
    per_emotion: dict[str, dict]
    theta_label: str | None = None

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "total_new_assignments": self.total_new_assignments,
            "unique_words_expanded": self.unique_words_expanded,
            "unique_patterns": self.unique_patterns,
            "avg_hamming": self.avg_hamming,
            "avg_hamming_norm": self.avg_hamming_norm,
            "overall_entropy_bits": self.overall_entropy,
            "per_emotion": self.per_emotion,
        }


@dataclass
class ExpansionResult:
    theta: float
    assignments: set[Assignment]
    expanded_lexicon: Lexicon
    diagnostics: ThresholdDiagnostics
    candidate_coverage: CoverageReport
    lexicon_coverage: CoverageReport
    unexpandable_emotions: list[str]
    skipped_in_seed: list[str]


@dataclass
class CandidateScores:
    """Theta-independent nearest-lexicon-word scores per candidate."""

    categories: tuple[str, ...]
    # candidate -> emotion -> (nearest lexicon word, calibrated similarity)
    best: dict[str, dict[str, tuple[str, float]]]
    candidate_coverage: CoverageReport
    lexicon_coverage: CoverageReport
    unexpandable_emotions: list[str]
    skipped_in_seed: list[str]


def score_candidates(
    candidates,
    seed_lexicon: Lexicon,
    table: EmbeddingTable,
    model: "ClusterModel",
    stats: ClusterStats,
    threads: int = 1,
) -> CandidateScores:
    """Nearest seed word and calibrated similarity per (candidate, emotion).

    Candidates are NFC-lowercased and deduplicated; words already in the
    seed lexicon are skipped entirely, words without an embedding are
    reported. Ties on the calibrated score resolve to the
    lexicographically smaller lexicon word.
    """
    seen: set[str] = set()
    cleaned: list[str] = []
    for c in candidates:
        w = normalize_word(c)
        if w and w not in seen:
            seen.add(w)
            cleaned.append(w)

    skipped_in_seed = sorted(w for w in cleaned if w in seed_lexicon)
    outside = [w for w in cleaned if w not in seed_lexicon]
    eligible, cand_coverage = split_by_coverage(table, outside)

    lex_words, lex_coverage = split_by_coverage(table, seed_lexicon.words())
    lex_mat = table.matrix(lex_words) if lex_words else np.zeros((0, table.dim))
    lex_norms = np.linalg.norm(lex_mat, axis=1)

    emotion_rows: dict[str, np.ndarray] = {}
    unexpandable: list[str] = []
    pos = {w: i for i, w in enumerate(lex_words)}
    for emotion in seed_lexicon.categories:
        rows = np.asarray(
            [pos[w] for w in seed_lexicon.words_with(emotion) if w in pos],
            dtype=np.int64,
        )
        if rows.size == 0:
            unexpandable.append(emotion)
        else:
            emotion_rows[emotion] = rows
    if unexpandable:
        warnings.warn(
            f"no embedded lexicon word carries: {', '.join(unexpandable)}; "
            "these emotions cannot be expanded",
            stacklevel=2,
        )

    valid = [i for i in range(stats.n_clusters) if stats.is_valid(i)]

    def score_one(cand: str) -> tuple[str, dict[str, tuple[str, float]]]:
        v = table.vector(cand)
        u_norm = np.linalg.norm(v)
        s_raw = np.clip((lex_mat @ v) / (lex_norms * u_norm), -1.0, 1.0)
        p = posterior(model.gmm, project(model.pca, v))
        for i in range(stats.n_clusters):
            if not stats.is_valid(i) and p[i] > NEGLIGIBLE_MASS:
                stats.require_valid(i)
        total = np.zeros_like(s_raw)
        for i in valid:
            z = (s_raw - stats.mu[i]) / stats.sigma[i]
            total += p[i] * np.clip(
                (z + stats.sigma_c) / (2.0 * stats.sigma_c), 0.0, 1.0
            )
        s_final = np.clip(total, 0.0, 1.0)
        best: dict[str, tuple[str, float]] = {}
        for emotion, rows in emotion_rows.items():
            j = rows[int(np.argmax(s_final[rows]))]
            best[emotion] = (lex_words[j], float(s_final[j]))
        return cand, best

    scored = ordered_map(score_one, eligible, threads=threads)
    return CandidateScores(
        categories=seed_lexicon.categories,
        best=dict(scored),
        candidate_coverage=cand_coverage,
        lexicon_coverage=lex_coverage,
        unexpandable_emotions=unexpandable,
        skipped_in_seed=skipped_in_seed,
    )


def result_at(scores: CandidateScores, theta: float) -> ExpansionResult:
    """Apply a strict threshold to precomputed candidate scores."""
    if not 0.0 < theta < 1.0:
        raise UsageError(f"theta must lie in (0, 1), got {theta}")
    categories = scores.categories
    index = {e: i for i, e in enumerate(categories)}
    assignments: set[Assignment] = set()
    entries: dict[str, LexiconEntry] = {}
    for cand in sorted(scores.best):
        flags = [0] * len(categories)
        support: dict[str, Support] = {}
        for emotion, (nearest, sim) in scores.best[cand].items():
            if sim > theta:  # strict: boundary equality does not assign
                assignments.add(
                    Assignment(word=cand, emotion=emotion, nearest=nearest, sim=sim)
                )
                flags[index[emotion]] = 1
                support[emotion] = Support(nearest=nearest, sim=sim)
        if any(flags):
            entries[cand] = LexiconEntry(
                word=cand,
                flags=tuple(flags),
                source=SOURCE_EXPANDED,
                support=support,
            )
    lex = Lexicon(categories=categories, entries=entries)
    result = ExpansionResult(
        theta=theta,
        assignments=assignments,
        expanded_lexicon=lex,
        diagnostics=None,
        candidate_coverage=scores.candidate_coverage,
        lexicon_coverage=scores.lexicon_coverage,
        unexpandable_emotions=list(scores.unexpandable_emotions),
        skipped_in_seed=list(scores.skipped_in_seed),
    )
    result.diagnostics = diagnostics(result)
    return result


def expand_at(
    candidates,
    seed_lexicon: Lexicon,
    table: EmbeddingTable,
    model: "ClusterModel",
    stats: ClusterStats,
    theta: float = DEFAULT_THETA,
    threads: int = 1,
) -> ExpansionResult:
    """Assign each candidate every emotion whose calibrated nearest-word
    similarity strictly exceeds ``theta``."""
    if not 0.0 < theta < 1.0:
        raise UsageError(f"theta must lie in (0, 1), got {theta}")
    scores = score_candidates(
        candidates, seed_lexicon, table, model, stats, threads=threads
    )
    return result_at(scores, theta)


def _entropy_bits(probs) -> float:
    h = 0.0
    for q in probs:
        if q > 0.0:
            h -= q * math.log2(q)
    return h


def diagnostics(result: ExpansionResult) -> ThresholdDiagnostics:
    """Coherence/diversity metrics of one expansion outcome."""
    categories = result.expanded_lexicon.categories
    words = result.expanded_lexicon.words()
    w = len(words)
    counts = {e: 0 for e in categories}
    for a in result.assignments:
        counts[a.emotion] += 1
    total = sum(counts.values())

    patterns = {result.expanded_lexicon[x].flags for x in words}
    if w >= 2:
        npairs = w * (w - 1) // 2
        disagreements = sum(counts[e] * (w - counts[e]) for e in categories)
        avg_hamming = disagreements / npairs
    else:
        avg_hamming = 0.0

    overall = _entropy_bits(c / total for c in counts.values()) if total else 0.0
    per_emotion = {}
    for e in categories:
        if w:
            r = counts[e] / w
            bent = _entropy_bits((r, 1.0 - r))
        else:
            bent = 0.0
        per_emotion[e] = {"count": counts[e], "binary_entropy": bent}

    return ThresholdDiagnostics(
        theta=result.theta,
        total_new_assignments=total,
        unique_words_expanded=w,
        unique_patterns=len(patterns),
        avg_hamming=avg_hamming,
        avg_hamming_norm=avg_hamming / len(categories),
        overall_entropy=overall,
        per_emotion=per_emotion,
    )


def theta_grid(
    theta_min: float = DEFAULT_GRID[0],
    theta_max: float = DEFAULT_GRID[1],
    step: float = DEFAULT_GRID[2],
) -> list[Decimal]:
    """Grid points theta_min + k*step as exact decimals (no float drift)."""
    if not (0.0 < theta_min <= theta_max < 1.0):
        raise UsageError(
            f"need 0 < theta_min <= theta_max < 1, got [{theta_min}, {theta_max}]"
        )
    if step <= 0.0:
        raise UsageError(f"step must be positive, got {step}")
    lo, hi, st = (Decimal(str(x)) for x in (theta_min, theta_max, step))
    grid = []
    k = 0
    while True:
        t = lo + k * st
        if t > hi:
            break
        grid.append(t)
        k += 1
    if not grid:
        raise UsageError("empty theta grid")
    return grid


@dataclass
class SweepReport:
    rows: list[ThresholdDiagnostics] = field(default_factory=list)

    def to_csv(self) -> str:
        emotions = self.rows[0].per_emotion if self.rows else EMOTIONS
        header = (
            "theta,total_new_assignments,unique_words_expanded,unique_patterns,"
            "avg_hamming,avg_hamming_norm,overall_entropy_bits,"
            + ",".join(f"count_{e},bent_{e}" for e in emotions)
        )
        lines = [header]
        for d in self.rows:
            cells = [
                d.theta_label if d.theta_label is not None else repr(d.theta),
                str(d.total_new_assignments),
                str(d.unique_words_expanded),
                str(d.unique_patterns),
                repr(d.avg_hamming),
                repr(d.avg_hamming_norm),
                repr(d.overall_entropy),
            ]
            for e, pe in d.per_emotion.items():
                cells.append(str(pe["count"]))
                cells.append(repr(pe["binary_entropy"]))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def sweep(
    candidates,
    seed_lexicon: Lexicon,
    table: EmbeddingTable,
    model: "ClusterModel",
    stats: ClusterStats,
    theta_min: float = DEFAULT_GRID[0],
    theta_max: float = DEFAULT_GRID[1],
    step: float = DEFAULT_GRID[2],
    threads: int = 1,
) -> SweepReport:
    """Expansion diagnostics across the theta grid.

    Calibrated similarities are computed once and shared by every grid
    point, so the rows are exactly what independent ``expand_at`` calls
    would produce.
    """
    grid = theta_grid(theta_min, theta_max, step)
    scores = score_candidates(
        candidates, seed_lexicon, table, model, stats, threads=threads
    )
    report = SweepReport()
    for t in grid:
        res = result_at(scores, float(t))
        res.diagnostics.theta_label = str(t)
        report.rows.append(res.diagnostics)
    return report
