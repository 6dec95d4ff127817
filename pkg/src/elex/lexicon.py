"""Categorical emotion lexicons in the NRC flat-file format.

A lexicon maps lowercase words to binary emotion vectors over eight
canonical categories. The flat TSV format is ``word<TAB>category<TAB>flag``;
the two sentiment categories (``negative``/``positive``) are parsed and
skipped so vectors stay eight-dimensional. JSONL is the lossless format:
it preserves entry provenance (original vs expanded) and per-emotion
support evidence.
"""

from __future__ import annotations

import json
import unicodedata
import warnings
from dataclasses import dataclass, field

from .errors import FormatError, MergeConflictError

# Canonical emotion order. Every vector, file column and report in the
# toolkit follows this order; nothing may permute it.
EMOTIONS = (
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "sadness",
    "surprise",
    "trust",
)

# Sentiment rows present in NRC distributions; ingested and dropped.
SENTIMENTS = ("negative", "positive")

SOURCE_ORIGINAL = "original"
SOURCE_EXPANDED = "expanded"


@dataclass(frozen=True)
class Support:
    """Evidence behind one expanded emotion flag."""

    nearest: str
    sim: float


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    flags: tuple[int, ...]
    source: str = SOURCE_ORIGINAL
    support: dict[str, Support] | None = None

    def has(self, category_index: int) -> bool:
        return self.flags[category_index] == 1


@dataclass
class Lexicon:
    """Word-keyed map of entries; immutable by convention after load.

    ``categories`` is normally the eight canonical emotions. Extra trailing
    categories can be enabled via the ``extra_dims`` hook on the loaders;
    their semantics are left to the caller.
    """

    categories: tuple[str, ...] = EMOTIONS
    entries: dict[str, LexiconEntry] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __getitem__(self, word: str) -> LexiconEntry:
        return self.entries[word]

    def words(self) -> list[str]:
        return sorted(self.entries)

    def words_with(self, emotion: str) -> list[str]:
        idx = self.categories.index(emotion)
        return sorted(w for w, e in self.entries.items() if e.flags[idx] == 1)

    def category_index(self, emotion: str) -> int:
        return self.categories.index(emotion)


def normalize_word(word: str) -> str:
    return unicodedata.normalize("NFC", word).lower()


def _check_word(word: str, path=None, line=None) -> None:
    if not word:
        raise FormatError("empty word", path=path, line=line)
    if any(ch.isspace() for ch in word):
        raise FormatError(f"word contains whitespace: {word!r}", path=path, line=line)


def validate_entry(entry: LexiconEntry, categories: tuple[str, ...] = EMOTIONS) -> None:
    """Raise if an entry violates the lexicon invariants."""
    _check_word(entry.word)
    if entry.word != normalize_word(entry.word):
        raise FormatError(f"word not NFC-lowercase: {entry.word!r}")
    if len(entry.flags) != len(categories):
        raise FormatError(
            f"{entry.word!r}: {len(entry.flags)} flags for {len(categories)} categories"
        )
    if any(f not in (0, 1) for f in entry.flags):
        raise FormatError(f"{entry.word!r}: flags must be 0 or 1")
    if entry.source not in (SOURCE_ORIGINAL, SOURCE_EXPANDED):
        raise FormatError(f"{entry.word!r}: bad source {entry.source!r}")
    if entry.source == SOURCE_EXPANDED:
        if entry.support is None:
            raise FormatError(f"{entry.word!r}: expanded entry without support")
        flagged = {categories[i] for i, f in enumerate(entry.flags) if f == 1}
        if set(entry.support) != flagged:
            raise FormatError(
                f"{entry.word!r}: support keys {sorted(entry.support)} do not "
                f"match flagged emotions {sorted(flagged)}"
            )
    elif entry.support is not None:
        raise FormatError(f"{entry.word!r}: original entry carries support")


def load_lexicon(
    path,
    keep_zero_entries: bool = False,
    extra_dims: tuple[str, ...] = (),
) -> Lexicon:
    """Load an NRC-style flat TSV (``word<TAB>category<TAB>flag``).

    Sentiment rows are skipped; the eight emotion rows of a word fold into
    one vector, with missing categories defaulting to 0. All-zero vectors
    are dropped unless ``keep_zero_entries``. Words are NFC-lowercased;
    entries that collide after folding are OR-merged with a warning.

    ``extra_dims`` appends extra accepted categories after the canonical
    eight (off by default; their meaning is not interpreted here).
    """
    categories = EMOTIONS + tuple(extra_dims)
    index = {cat: i for i, cat in enumerate(categories)}
    known = set(categories) | set(SENTIMENTS)
    flags: dict[str, list[int]] = {}
    raw_forms: dict[str, str] = {}
    folded: set[str] = set()

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(
                    f"expected 3 tab-separated fields, got {len(parts)}",
                    path=path,
                    line=lineno,
                )
            raw_word, category, flag_s = parts
            if category not in known:
                raise FormatError(
                    f"unknown category {category!r}", path=path, line=lineno
                )
            if flag_s not in ("0", "1"):
                raise FormatError(f"bad flag {flag_s!r}", path=path, line=lineno)
            word = normalize_word(raw_word)
            _check_word(word, path=path, line=lineno)
            if word in raw_forms and raw_forms[word] != raw_word:
                folded.add(word)
            raw_forms[word] = raw_word
            if category in SENTIMENTS:
                # Row is validated, then dropped: vectors stay categorical.
                flags.setdefault(word, [0] * len(categories))
                continue
            vec = flags.get(word)
            if vec is None:
                vec = [0] * len(categories)
                flags[word] = vec
            if flag_s == "1":
                vec[index[category]] = 1

    if folded:
        warnings.warn(
            f"{path}: {len(folded)} words collided after case folding; "
            "flags OR-merged",
            stacklevel=2,
        )

    entries = {}
    for word, vec in flags.items():
        if not keep_zero_entries and not any(vec):
            continue
        entries[word] = LexiconEntry(word=word, flags=tuple(vec))
    return Lexicon(categories=categories, entries=entries)


def load_lexicon_jsonl(
    path,
    keep_zero_entries: bool = False,
    extra_dims: tuple[str, ...] = (),
) -> Lexicon:
    """Load the JSONL form; provenance and support are preserved."""
    categories = EMOTIONS + tuple(extra_dims)
    index = {cat: i for i, cat in enumerate(categories)}
    entries: dict[str, LexiconEntry] = {}

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"bad JSON: {exc}", path=path, line=lineno) from exc
            try:
                word = normalize_word(rec["word"])
                names = rec["emotions"]
                source = rec.get("source", SOURCE_ORIGINAL)
            except KeyError as exc:
                raise FormatError(f"missing field {exc}", path=path, line=lineno) from exc
            _check_word(word, path=path, line=lineno)
            vec = [0] * len(categories)
            for name in names:
                if name not in index:
                    raise FormatError(
                        f"unknown emotion {name!r}", path=path, line=lineno
                    )
                vec[index[name]] = 1
            support = None
            if "support" in rec and rec["support"] is not None:
                support = {
                    emo: Support(nearest=s["nearest"], sim=float(s["sim"]))
                    for emo, s in rec["support"].items()
                }
            if not keep_zero_entries and not any(vec):
                continue
            if word in entries:
                raise FormatError(f"duplicate word {word!r}", path=path, line=lineno)
            entry = LexiconEntry(
                word=word, flags=tuple(vec), source=source, support=support
            )
            validate_entry(entry, categories)
            entries[word] = entry
    return Lexicon(categories=categories, entries=entries)


def save_lexicon(lex: Lexicon, path, format: str = "tsv") -> None:
    """Write a lexicon; ``tsv`` is the flat NRC shape, ``jsonl`` is lossless.

    TSV emits one row per (word, category) for every category, words in
    lexicographic order. Provenance survives only in JSONL.
    """
    if format == "tsv":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for word in lex.words():
                entry = lex.entries[word]
                for i, cat in enumerate(lex.categories):
                    fh.write(f"{word}\t{cat}\t{entry.flags[i]}\n")
    elif format == "jsonl":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for word in lex.words():
                fh.write(entry_to_json(lex.entries[word], lex.categories) + "\n")
    else:
        raise ValueError(f"unknown lexicon format {format!r}")


def entry_to_json(entry: LexiconEntry, categories: tuple[str, ...] = EMOTIONS) -> str:
    rec: dict = {
        "word": entry.word,
        "emotions": [categories[i] for i, f in enumerate(entry.flags) if f == 1],
        "source": entry.source,
    }
    if entry.support is not None:
        rec["support"] = {
            emo: {"nearest": s.nearest, "sim": s.sim}
            for emo, s in sorted(entry.support.items())
        }
    return json.dumps(rec, ensure_ascii=False, sort_keys=True)


def merge(base: Lexicon, expansion: Lexicon) -> Lexicon:
    """Add expansion entries for words absent from ``base``.

    Base entries are never modified. Any overlap is a hard error carrying
    the colliding words; silent overwrites would corrupt curated labels.
    """
    if base.categories != expansion.categories:
        raise ValueError("category orders differ between base and expansion")
    bad = [w for w, e in expansion.entries.items() if e.source != SOURCE_EXPANDED]
    if bad:
        raise ValueError(
            f"expansion entries must have source={SOURCE_EXPANDED!r}: {sorted(bad)[:5]}"
        )
    collisions = set(base.entries) & set(expansion.entries)
    if collisions:
        raise MergeConflictError(collisions)
    entries = dict(base.entries)
    entries.update(expansion.entries)
    return Lexicon(categories=base.categories, entries=entries)
