#!/usr/bin/env python3
"""Flatten a claim-stance CSV (topic/claim/stance columns) to JSONL rows."""

import csv
import json
import sys


def flatten(path):
    with open(path, encoding="utf-8", newline="") as fh:
        for i, row in enumerate(csv.DictReader(fh)):
            yield {
                "claim_id": f"claim{i:05d}",
                "topic": row["topic_text"],
                "claim_text": row["claim_text"],
                "claim_stance": row["stance"],
            }


def main():
    if len(sys.argv) != 2:
        sys.exit(f"usage: {sys.argv[0]} <claims.csv>")
    for row in flatten(sys.argv[1]):
        print(json.dumps(row, ensure_ascii=False, sort_keys=True))


if __name__ == "__main__":
    main()
