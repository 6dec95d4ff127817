#!/usr/bin/env python3
"""Flatten a sentence-level TSV dump (topic/sentence/annotation) to JSONL.

Annotation values like ``Argument_for``/``Argument_against`` are reduced
to the labels the converter's table documents (``for``/``against``;
``NoArgument`` passes through and is skipped downstream).
"""

import csv
import json
import sys


def flatten(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t")
        for i, row in enumerate(reader):
            label = row["annotation"]
            if label.lower().startswith("argument_"):
                label = label.split("_", 1)[1]
            yield {
                "sentence_id": row.get("sentenceHash", f"s{i:05d}"),
                "target": row["topic"],
                "sentence": row["sentence"],
                "annotation": label,
            }


def main():
    if len(sys.argv) != 2:
        sys.exit(f"usage: {sys.argv[0]} <sentences.tsv>")
    for row in flatten(sys.argv[1]):
        print(json.dumps(row, ensure_ascii=False, sort_keys=True))


if __name__ == "__main__":
    main()
