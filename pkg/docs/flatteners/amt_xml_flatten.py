#!/usr/bin/env python3
"""Flatten a microtext argumentation-graph XML file to JSONL rows.

One row per text segment (edu); the segment's stance comes from the adu
node it is linked to via a ``seg`` edge. Rows print to stdout in the
shape ``elex corpus convert --source amt`` expects.
"""

import json
import sys
import xml.etree.ElementTree as ET


def flatten(path):
    tree = ET.parse(path)
    root = tree.getroot()
    graph_id = root.get("id", "graph")
    topic = (root.get("topic_id") or "unknown-topic").replace("_", " ")
    adu_type = {n.get("id"): n.get("type") for n in root.iter("adu")}
    seg_edges = {
        e.get("src"): e.get("trg")
        for e in root.iter("edge")
        if e.get("type") == "seg"
    }
    for edu in root.iter("edu"):
        eid = edu.get("id")
        adu = seg_edges.get(eid)
        stance = adu_type.get(adu)
        if stance not in ("pro", "opp"):
            continue  # unlinked or non-stance segment
        yield {
            "id": f"{graph_id}_{eid}",
            "topic": topic,
            "text": (edu.text or "").strip(),
            "stance": stance,
        }


def main():
    if len(sys.argv) != 2:
        sys.exit(f"usage: {sys.argv[0]} <arggraph.xml>")
    for row in flatten(sys.argv[1]):
        print(json.dumps(row, ensure_ascii=False, sort_keys=True))


if __name__ == "__main__":
    main()
