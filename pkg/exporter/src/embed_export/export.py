"""Produce EMBTXT embedding files for a wordlist from a pretrained model.

Pooling policy (fixed): each word is presented alone, with no surrounding
context and no special tokens; its vector is the mean of the final hidden
layer over the word's subword tokens. The policy is recorded as a ``#``
comment line before the EMBTXT count header, which consumers ignore.

Determinism: the model revision is pinned (hub ids must carry ``@rev``;
local paths are pinned by their content), inference runs in eval mode on
a single torch thread, and rows are assembled strictly in input order,
so the same invocation always yields byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

POOLING_NOTE = (
    "mean-pooled final-hidden-layer subword embeddings; "
    "each word embedded alone, no special tokens"
)
DEFAULT_DIM = 768
DEFAULT_BATCH = 32


class ExportError(Exception):
    pass


@dataclass
class ExportConfig:
    model: str            # "<hub-id>@<revision>" or a local model directory
    wordlist: Path
    out: Path
    dim: int = DEFAULT_DIM
    batch_size: int = DEFAULT_BATCH


@dataclass
class ExportReport:
    written: int
    skipped: list[str] = field(default_factory=list)


def parse_model_ref(ref: str) -> tuple[str, str | None]:
    """Split ``id@revision``; local paths count as pinned by content."""
    if Path(ref).exists():
        return ref, None
    if "@" not in ref:
        raise ExportError(
            f"hub model {ref!r} must pin a revision: use '<id>@<revision>'"
        )
    name, rev = ref.rsplit("@", 1)
    if not name or not rev:
        raise ExportError(f"bad model reference {ref!r}")
    return name, rev


def read_wordlist(path) -> list[str]:
    """One word per line; blank lines dropped, duplicates keep first slot."""
    seen = set()
    words = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            w = raw.strip()
            if w and w not in seen:
                seen.add(w)
                words.append(w)
    return words


def _load_model(config: ExportConfig):
    import torch
    from transformers import AutoModel, AutoTokenizer

    name, rev = parse_model_ref(config.model)
    try:
        tokenizer = AutoTokenizer.from_pretrained(name, revision=rev)
        model = AutoModel.from_pretrained(name, revision=rev)
    except Exception as exc:
        raise ExportError(f"cannot load model {config.model!r}: {exc}") from exc
    model.eval()
    torch.set_num_threads(1)
    hidden = getattr(model.config, "hidden_size", None)
    if hidden is None:
        hidden = getattr(model.config, "dim", None)
    if hidden != config.dim:
        raise ExportError(
            f"model hidden size {hidden} does not match expected dim {config.dim}"
        )
    return tokenizer, model


def export(config: ExportConfig) -> ExportReport:
    import torch

    tokenizer, model = _load_model(config)
    words = read_wordlist(config.wordlist)

    kept: list[str] = []
    skipped: list[str] = []
    for w in words:
        ids = tokenizer(w, add_special_tokens=False)["input_ids"]
        if len(ids) == 0:
            skipped.append(w)
        else:
            kept.append(w)

    rows: list[tuple[str, list[float]]] = []
    with torch.no_grad():
        for start in range(0, len(kept), config.batch_size):
            batch = kept[start : start + config.batch_size]
            enc = tokenizer(
                batch,
                add_special_tokens=False,
                padding=True,
                return_tensors="pt",
            )
            hidden = model(**enc).last_hidden_state      # (B, T, H)
            mask = enc["attention_mask"].unsqueeze(-1).to(hidden.dtype)
            vecs = (hidden * mask).sum(dim=1) / mask.sum(dim=1)
            for w, v in zip(batch, vecs):
                rows.append((w, v.tolist()))

    with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# embtxt: {POOLING_NOTE}; model: {config.model}\n")
        fh.write(f"{len(rows)} {config.dim}\n")
        for w, vec in rows:
            fh.write(w + " " + " ".join(format(x, ".8g") for x in vec) + "\n")
    return ExportReport(written=len(rows), skipped=skipped)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="elex-export",
        description="export EMBTXT word vectors from a pinned transformer",
    )
    parser.add_argument(
        "--model", required=True, help="'<hub-id>@<revision>' or local model dir"
    )
    parser.add_argument("--wordlist", required=True, help="one word per line, UTF-8")
    parser.add_argument("--out", required=True, help="EMBTXT output path")
    parser.add_argument("--dim", type=int, default=DEFAULT_DIM)
    parser.add_argument("--batch-size", type=int, default=DEFAULT_BATCH)
    args = parser.parse_args(argv)
    if args.batch_size < 1 or args.dim < 1:
        print("error: --dim and --batch-size must be positive", file=sys.stderr)
        return 1

    config = ExportConfig(
        model=args.model,
        wordlist=Path(args.wordlist),
        out=Path(args.out),
        dim=args.dim,
        batch_size=args.batch_size,
    )
    try:
        report = export(config)
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for w in report.skipped:
        print(f"warning: {w!r} tokenized to zero subwords, skipped", file=sys.stderr)
    print(f"wrote {report.written} vectors to {config.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
