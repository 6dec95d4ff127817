"""Lexicon-derived emotion feature vectors for text segments."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .lexicon import Lexicon

AGGREGATION_MODES = ("fraction", "count", "binary")


@dataclass
class EmotionFeatures:
    values: tuple[float, ...]
    token_count: int
    matched_count: int


def _strip_punct(token: str) -> str:
    i, j = 0, len(token)
    while i < j and unicodedata.category(token[i]).startswith("P"):
        i += 1
    while j > i and unicodedata.category(token[j - 1]).startswith("P"):
        j -= 1
    return token[i:j]


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, strip edge punctuation.

    Internal punctuation (hyphens, apostrophes) is kept; there is no
    stemming or lemmatization, the expanded lexicon is what supplies
    coverage for related word forms.
    """
    out = []
    for raw in text.lower().split():
        tok = _strip_punct(raw)
        if tok:
            out.append(tok)
    return out


def emotion_features(
    text: str, lexicon: Lexicon, mode: str = "fraction"
) -> EmotionFeatures:
    """Per-emotion aggregate of lexicon hits over the tokens of ``text``.

    ``fraction`` (default) divides per-emotion token hits by the total
    token count, ``count`` keeps raw hits, ``binary`` flags presence.
    Empty text yields the zero vector.
    """
    if mode not in AGGREGATION_MODES:
        raise ValueError(f"mode must be one of {AGGREGATION_MODES}, got {mode!r}")
    tokens = tokenize(text)
    n = len(tokens)
    counts = [0] * len(lexicon.categories)
    matched = 0
    for tok in tokens:
        entry = lexicon.entries.get(tok)
        if entry is None:
            continue
        matched += 1
        for i, f in enumerate(entry.flags):
            counts[i] += f
    if mode == "fraction":
        values = tuple(c / n if n else 0.0 for c in counts)
    elif mode == "count":
        values = tuple(float(c) for c in counts)
    else:
        values = tuple(1.0 if c else 0.0 for c in counts)
    return EmotionFeatures(values=values, token_count=n, matched_count=matched)
