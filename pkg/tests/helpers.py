"""Shared builders for synthetic test data."""

import random

import numpy as np

EMOTIONS = (
    "anger", "anticipation", "disgust", "fear",
    "joy", "sadness", "surprise", "trust",
)


def make_blob_embeddings(
    rng: np.random.Generator,
    n_per_blob=(12, 12, 12),
    dim=24,
    center_scale=10.0,
    noise=(0.2, 0.9, 1.6),
    center_jitter=0.05,
    prefix="w",
):
    """Three orthogonal blobs with per-blob noise on the non-center axes.

    Returns (vectors dict, blob assignment dict). Larger noise lowers the
    within-blob cosine similarity, giving each blob its own raw scale.
    """
    vectors = {}
    blob_of = {}
    idx = 0
    for b, n in enumerate(n_per_blob):
        for _ in range(n):
            v = rng.normal(0.0, center_jitter, size=dim)
            v[b] += center_scale
            v[3:] += rng.normal(0.0, noise[b], size=dim - 3)
            w = f"{prefix}{idx:03d}"
            vectors[w] = v
            blob_of[w] = b
            idx += 1
    return vectors, blob_of


def random_lexicon_flags(words, rnd: random.Random, p_extra=0.3):
    """Random emotion flags guaranteeing every emotion has a carrier."""
    flags = {}
    for i, w in enumerate(sorted(words)):
        mine = {EMOTIONS[i % 8]}
        for e in EMOTIONS:
            if e not in mine and rnd.random() < p_extra:
                mine.add(e)
        flags[w] = {e: (1 if e in mine else 0) for e in EMOTIONS}
    return flags


def write_lexicon_tsv(path, flags):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for w in sorted(flags):
            for e in EMOTIONS:
                fh.write(f"{w}\t{e}\t{flags[w][e]}\n")


def write_embtxt(path, vectors, fmt=".10g"):
    words = sorted(vectors)
    dim = len(next(iter(vectors.values())))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(words)} {dim}\n")
        for w in words:
            fh.write(w + " " + " ".join(format(float(x), fmt) for x in vectors[w]) + "\n")
