"""Stance-corpus normalization into one binary For/Against schema.

Inputs are pre-flattened JSONL rows (one segment per line) with
source-specific field names; ``convert`` projects the native labels onto
the unified schema and drops non-argumentative rows. Unified records are
``{"id", "topic", "text", "stance", "source"}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import FormatError
from .features import tokenize

FOR = "For"
AGAINST = "Against"
SKIP = "Skip"

SOURCES = ("amt", "ukp", "pe", "ibm")

# Native label -> unified label, per source, matched case-insensitively.
# Every table also accepts the unified labels themselves so converting an
# already-converted file is a no-op.
_UNIFIED = {"for": FOR, "against": AGAINST}
LABEL_MAPS: dict[str, dict[str, str]] = {
    "amt": {"pro": FOR, "opp": AGAINST, **_UNIFIED},
    "ibm": {"pro": FOR, "con": AGAINST, **_UNIFIED},
    "ukp": {"support": FOR, "oppose": AGAINST, "noargument": SKIP, **_UNIFIED},
    "pe": dict(_UNIFIED),
}


@dataclass(frozen=True)
class StanceRecord:
    id: str
    topic: str
    text: str
    stance: str  # For | Against
    source: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "topic": self.topic,
                "text": self.text,
                "stance": self.stance,
                "source": self.source,
            },
            ensure_ascii=False,
            sort_keys=True,
        )


@dataclass
class FieldMap:
    """Where to find the unified fields in a source-specific row."""

    id_field: str = "id"
    topic_field: str = "topic"
    text_field: str = "text"
    label_field: str = "stance"


@dataclass
class ConvertOutcome:
    records: list[StanceRecord]
    skipped: int = 0
    errors: list[str] = field(default_factory=list)
    total_rows: int = 0


def map_label(raw_label: str, source: str) -> str:
    """Project a native stance label onto For / Against / Skip."""
    if source not in LABEL_MAPS:
        raise FormatError(f"unknown corpus source {source!r}")
    if not raw_label:
        raise FormatError(f"empty label for source {source!r}")
    mapped = LABEL_MAPS[source].get(raw_label.strip().lower())
    if mapped is None:
        raise FormatError(f"unknown label {raw_label!r} for source {source!r}")
    return mapped


def convert(rows, source: str, fields: FieldMap | None = None) -> ConvertOutcome:
    """Map an iterable of raw dict rows into unified stance records.

    Rows whose label projects to Skip are dropped and counted. Bad rows
    (missing field, empty topic/text, unknown label) are collected as
    per-row errors with the 1-based row number; the caller decides
    whether partial failure is fatal.
    """
    if source not in SOURCES:
        raise FormatError(f"unknown corpus source {source!r}")
    fields = fields or FieldMap()
    out: list[StanceRecord] = []
    skipped = 0
    errors: list[str] = []
    rowno = 0
    for rowno, row in enumerate(rows, start=1):
        try:
            rid = str(row[fields.id_field])
            topic = str(row[fields.topic_field])
            text = str(row[fields.text_field])
            label = str(row[fields.label_field])
        except KeyError as exc:
            errors.append(f"row {rowno}: missing field {exc}")
            continue
        if not topic or not text:
            errors.append(f"row {rowno}: empty topic or text")
            continue
        try:
            stance = map_label(label, source)
        except FormatError as exc:
            errors.append(f"row {rowno}: {exc}")
            continue
        if stance == SKIP:
            skipped += 1
            continue
        out.append(
            StanceRecord(id=rid, topic=topic, text=text, stance=stance, source=source)
        )
    return ConvertOutcome(records=out, skipped=skipped, errors=errors, total_rows=rowno)


def read_jsonl(path):
    """Yield dict rows from a JSONL file, with line numbers on errors."""
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"bad JSON: {exc}", path=path, line=lineno) from exc


def read_records(path) -> list[StanceRecord]:
    """Load unified JSONL records, validating the schema."""
    records = []
    for rowno, row in enumerate(read_jsonl(path), start=1):
        try:
            rec = StanceRecord(
                id=str(row["id"]),
                topic=str(row["topic"]),
                text=str(row["text"]),
                stance=str(row["stance"]),
                source=str(row["source"]),
            )
        except KeyError as exc:
            raise FormatError(f"missing field {exc}", path=path, line=rowno)
        if rec.stance not in (FOR, AGAINST):
            raise FormatError(
                f"bad stance {rec.stance!r}", path=path, line=rowno
            )
        if not rec.topic or not rec.text:
            raise FormatError("empty topic or text", path=path, line=rowno)
        records.append(rec)
    return records


@dataclass
class CorpusStats:
    record_count: int
    label_counts: dict[str, int]
    label_fractions: dict[str, float]
    topic_count: int
    mean_tokens: float
    per_source: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "record_count": self.record_count,
            "label_counts": self.label_counts,
            "label_fractions": self.label_fractions,
            "topic_count": self.topic_count,
            "mean_tokens": self.mean_tokens,
            "per_source": self.per_source,
        }


def stats(records) -> CorpusStats:
    """Size, label balance, topic count and mean segment length."""
    records = list(records)
    if not records:
        raise FormatError("empty record stream")
    n = len(records)
    label_counts = {FOR: 0, AGAINST: 0}
    per_source: dict[str, int] = {}
    topics = set()
    total_tokens = 0
    for rec in records:
        label_counts[rec.stance] += 1
        per_source[rec.source] = per_source.get(rec.source, 0) + 1
        topics.add(rec.topic)
        total_tokens += len(tokenize(rec.text))
    fractions = {lab: c / n for lab, c in label_counts.items()}
    return CorpusStats(
        record_count=n,
        label_counts=label_counts,
        label_fractions=fractions,
        topic_count=len(topics),
        mean_tokens=total_tokens / n,
        per_source=dict(sorted(per_source.items())),
    )
