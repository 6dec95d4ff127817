#!/usr/bin/env python3
"""Regenerate the checked-in test fixtures (deterministic, seeded).

The embedding fixture has three well-separated blobs along the first
three axes with per-blob noise so each blob gets its own raw-similarity
scale; seed lexicon words and expansion candidates are drawn from the
same blobs. Keep the seeds fixed: acceptance tests compare pipeline
output bytes against these files.
"""

import json
import random
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

CONSONANTS = "bdfgklmnprstvz"
VOWELS = "aeiou"

EMOTIONS = (
    "anger", "anticipation", "disgust", "fear",
    "joy", "sadness", "surprise", "trust",
)

N_SEED = 30
N_CAND = 18  # per-blob candidates present in the embedding table
DIM = 8
CENTER_SCALE = 10.0
BLOB_NOISE = (0.2, 0.9, 1.6)  # distinct similarity scales per blob
CENTER_JITTER = 0.05


def pseudo_words(rnd: random.Random, n: int) -> list[str]:
    seen = set()
    out = []
    while len(out) < n:
        w = "".join(
            rnd.choice(CONSONANTS) + rnd.choice(VOWELS)
            for _ in range(rnd.choice((2, 3)))
        )
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def gen_embeddings_and_lexicon():
    rnd = random.Random(42)
    rng = np.random.default_rng(42)
    words = pseudo_words(rnd, N_SEED + N_CAND)
    seed_words, cand_words = words[:N_SEED], words[N_SEED:]

    def blob_point(blob: int) -> np.ndarray:
        v = rng.normal(0.0, CENTER_JITTER, size=DIM)
        v[blob] += CENTER_SCALE
        v[3:] += rng.normal(0.0, BLOB_NOISE[blob], size=DIM - 3)
        return v

    vectors = {}
    for i, w in enumerate(seed_words):
        vectors[w] = blob_point(i % 3)
    for i, w in enumerate(cand_words):
        vectors[w] = blob_point(i % 3)

    # Emotion flags: every emotion carried by several seed words.
    flags = {}
    for i, w in enumerate(seed_words):
        mine = {EMOTIONS[i % 8]}
        for e in EMOTIONS:
            if e not in mine and rnd.random() < 0.25:
                mine.add(e)
        flags[w] = mine

    emb_path = FIXTURES / "embeddings_8d.txt"
    with emb_path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(vectors)} {DIM}\n")
        for w in sorted(vectors):
            comps = " ".join(format(x, ".8g") for x in vectors[w])
            fh.write(f"{w} {comps}\n")

    lex_path = FIXTURES / "seed_lexicon.tsv"
    with lex_path.open("w", encoding="utf-8", newline="\n") as fh:
        for w in sorted(seed_words):
            for e in EMOTIONS:
                fh.write(f"{w}\t{e}\t{1 if e in flags[w] else 0}\n")
            # NRC distributions carry sentiment rows; loaders must skip them.
            fh.write(f"{w}\tnegative\t{1 if rnd.random() < 0.4 else 0}\n")
            fh.write(f"{w}\tpositive\t{1 if rnd.random() < 0.4 else 0}\n")

    cand_path = FIXTURES / "candidates.txt"
    extra = ["zyzzyx", "qwexo"]  # not in the embedding table
    listing = list(cand_words) + extra + [seed_words[0]]  # last one: seed dup
    rnd.shuffle(listing)
    cand_path.write_text("\n".join(listing) + "\n", encoding="utf-8")

    return seed_words, cand_words


AMT_TOPICS = [
    "school uniforms should be mandatory",
    "cities should expand bike lanes",
]
UKP_TOPICS = ["nuclear energy", "school vouchers"]
IBM_TOPICS = ["video games improve cognition", "open borders help economies"]


def gen_corpora(seed_words, cand_words):
    rnd = random.Random(7)

    def amt_rows(part):
        rows = []
        for i in range(6):
            rows.append(
                {
                    "id": f"amt{part}_{i:03d}",
                    "topic": AMT_TOPICS[i % 2],
                    "text": f"Segment {i} argues the point with conviction and clear evidence.",
                    "stance": "Pro" if i % 2 == 0 else "Opp",
                }
            )
        return rows

    for part in (1, 2):
        path = FIXTURES / f"corpus_amt{part}.jsonl"
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            for row in amt_rows(part):
                fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")

    ukp_labels = ["support", "oppose", "NoArgument", "support", "oppose", "NoArgument"]
    with (FIXTURES / "corpus_ukp.jsonl").open("w", encoding="utf-8", newline="\n") as fh:
        for i, lab in enumerate(ukp_labels):
            row = {
                "sentence_id": f"ukp_{i:03d}",
                "target": UKP_TOPICS[i % 2],
                "sentence": f"Comment {i} takes a position on the matter at hand.",
                "annotation": lab,
            }
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")

    with (FIXTURES / "corpus_ibm.jsonl").open("w", encoding="utf-8", newline="\n") as fh:
        for i in range(6):
            row = {
                "claim_id": f"ibm_{i:03d}",
                "topic": IBM_TOPICS[i % 2],
                "claim_text": f"Claim {i} asserts a consequence of the policy.",
                "claim_stance": "PRO" if i % 3 else "CON",
            }
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")

    with (FIXTURES / "corpus_pe.jsonl").open("w", encoding="utf-8", newline="\n") as fh:
        for i in range(6):
            row = {
                "claim_id": f"pe_{i:03d}",
                "major_claim": "the essay's central claim",
                "claim": f"Claim {i} supports or attacks the major claim.",
                "stance": "For" if i % 2 == 0 else "Against",
            }
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")

    # Unified corpus whose texts mix fixture vocabulary with filler, so the
    # features stage has lexicon hits.
    vocab = list(seed_words) + list(cand_words)
    with (FIXTURES / "unified_corpus.jsonl").open("w", encoding="utf-8", newline="\n") as fh:
        for i in range(10):
            n_hits = rnd.randint(2, 5)
            hits = [rnd.choice(vocab) for _ in range(n_hits)]
            filler = ["the", "argument", "clearly", "shows", "that"]
            toks = filler[: rnd.randint(2, 5)] + hits
            rnd.shuffle(toks)
            row = {
                "id": f"u_{i:03d}",
                "topic": "synthetic fixture topic",
                "text": " ".join(toks) + ".",
                "stance": "For" if i % 2 == 0 else "Against",
                "source": "amt",
            }
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    seed_words, cand_words = gen_embeddings_and_lexicon()
    gen_corpora(seed_words, cand_words)
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
