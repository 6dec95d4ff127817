#!/usr/bin/env python3
"""Flatten a brat-annotated persuasive essay (.ann + .txt) to JSONL rows.

The essay's MajorClaim span becomes the topic; each Claim span with a
Stance attribute becomes one row. Premises carry no stance attribute in
this scheme and are not emitted.
"""

import json
import sys
from pathlib import Path


def flatten(ann_path, txt_path):
    text = Path(txt_path).read_text(encoding="utf-8")
    spans = {}    # T-id -> (kind, surface text)
    stance = {}   # T-id -> For/Against
    for line in Path(ann_path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        tag, rest = line.split("\t", 1)
        if tag.startswith("T"):
            meta, surface = rest.split("\t", 1)
            kind, start, end = meta.split(" ")
            spans[tag] = (kind, text[int(start):int(end)] or surface)
        elif tag.startswith("A"):
            name, target, value = rest.split(" ")
            if name == "Stance":
                stance[target] = value
    major = next((s for kind, s in spans.values() if kind == "MajorClaim"), None)
    if major is None:
        return
    essay = Path(ann_path).stem
    for tid, (kind, surface) in sorted(spans.items()):
        if kind == "Claim" and tid in stance:
            yield {
                "id": f"{essay}_{tid}",
                "major_claim": major,
                "claim": surface,
                "stance": stance[tid],
            }


def main():
    if len(sys.argv) != 3:
        sys.exit(f"usage: {sys.argv[0]} <essay.ann> <essay.txt>")
    for row in flatten(sys.argv[1], sys.argv[2]):
        print(json.dumps(row, ensure_ascii=False, sort_keys=True))


if __name__ == "__main__":
    main()
