"""Canonical JSON output and run manifests.

All JSON the toolkit writes goes through ``dumps``: keys sorted, reals
rendered with 17 significant digits (enough to round-trip float64
exactly), no locale or hash-order dependence. That is what makes output
files byte-comparable across runs and thread counts.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value in output: {x}")
    s = format(float(x), ".17g")
    # Keep a float marker so values round-trip as floats, not ints.
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _emit(obj) -> str:
    if isinstance(obj, dict):
        items = ",".join(
            f"{json.dumps(str(k), ensure_ascii=False)}:{_emit(v)}"
            for k, v in sorted(obj.items())
        )
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_emit(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return _emit(obj.tolist())
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps(obj) -> str:
    return _emit(obj)


def dump(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_emit(obj))
        fh.write("\n")


def load(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(path, subcommand: str, config: dict, inputs, tool_version: str) -> None:
    """Record what produced a run's outputs: config + input content hashes."""
    manifest = {
        "subcommand": subcommand,
        "config": config,
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "tool_version": tool_version,
    }
    dump(manifest, path)
