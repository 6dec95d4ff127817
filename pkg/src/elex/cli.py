"""Command-line pipeline driver.

Subcommands: cluster, histogram, expand, sweep, features, corpus convert,
corpus stats. Every run writes a machine-readable manifest
(``<out>.manifest.json`` unless ``--manifest`` overrides) recording the
resolved config and content hashes of all inputs; re-running with the
same inputs reproduces all outputs byte for byte. Exit codes: 0 ok,
1 usage, 2 input format, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .calibrate import compute_cluster_stats
from .cluster import DEFAULT_K, DEFAULT_PCA_DIM, fit_gmm, fit_pca, project
from .corpus import FieldMap, convert, read_jsonl, read_records, stats
from .embeddings import load_embeddings, similarity_histogram, split_by_coverage
from .errors import ElexError, FormatError, NumericalError, UsageError
from .expand import DEFAULT_GRID, DEFAULT_THETA, expand_at, sweep
from .features import AGGREGATION_MODES, emotion_features
from .jsonio import dump as json_dump, write_manifest
from .lexicon import load_lexicon, load_lexicon_jsonl, save_lexicon
from .modelio import ClusterModel, load_model, save_model
from .parallel import resolve_threads


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        raise UsageError(message)


def _read_lexicon(path, keep_zero_entries=False, fmt="auto"):
    if fmt == "auto":
        fmt = "jsonl" if str(path).endswith(".jsonl") else "tsv"
    if fmt == "jsonl":
        return load_lexicon_jsonl(path, keep_zero_entries=keep_zero_entries)
    return load_lexicon(path, keep_zero_entries=keep_zero_entries)


def _read_wordlist(path) -> list[str]:
    words = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            w = raw.strip()
            if w and not w.startswith("#"):
                words.append(w)
    return words


def _manifest_path(args) -> str:
    return args.manifest if args.manifest else f"{args.out}.manifest.json"


def _emit_manifest(args, subcommand: str, config: dict, inputs) -> None:
    write_manifest(_manifest_path(args), subcommand, config, inputs, __version__)


def cmd_cluster(args) -> int:
    table = load_embeddings(args.embeddings)
    lexicon = _read_lexicon(args.lexicon, args.keep_zero_entries, args.lexicon_format)
    words, coverage = split_by_coverage(table, lexicon.words())
    if coverage.missing:
        print(
            f"warning: {len(coverage.missing)} lexicon words lack embeddings "
            f"(coverage {coverage.coverage_ratio:.3f})",
            file=sys.stderr,
        )
    pca = fit_pca(table, words, out_dim=args.pca_dim)
    points = project(pca, table.matrix(words))
    gmm = fit_gmm(
        points,
        k=args.k,
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
        reg=args.reg,
        restarts=args.restarts,
    )
    if not gmm.converged:
        print(f"warning: EM did not converge in {args.max_iter} iterations",
              file=sys.stderr)
    model = ClusterModel(dim=table.dim, pca=pca, gmm=gmm)
    model.stats = compute_cluster_stats(table, lexicon, model)
    save_model(model, args.out)
    _emit_manifest(
        args,
        "cluster",
        {
            "embeddings": args.embeddings,
            "lexicon": args.lexicon,
            "out": args.out,
            "k": args.k,
            "pca_dim": args.pca_dim,
            "seed": args.seed,
            "tol": args.tol,
            "max_iter": args.max_iter,
            "reg": args.reg,
            "restarts": args.restarts,
            "keep_zero_entries": args.keep_zero_entries,
        },
        [args.embeddings, args.lexicon],
    )
    return 0


def cmd_histogram(args) -> int:
    if args.bins <= 0:
        raise UsageError("--bins must be positive")
    table = load_embeddings(args.embeddings)
    lexicon = _read_lexicon(args.lexicon, args.keep_zero_entries, args.lexicon_format)
    hist = similarity_histogram(
        table, lexicon, bins=args.bins, include_self=not args.exclude_self
    )
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            "bin_lo,bin_hi,"
            + ",".join(f"count_{e}" for e in lexicon.categories)
            + "\n"
        )
        for b in range(hist.bins):
            row = [repr(float(hist.edges[b])), repr(float(hist.edges[b + 1]))]
            row += [str(int(hist.counts[e][b])) for e in lexicon.categories]
            fh.write(",".join(row) + "\n")
    cov_path = args.coverage_out or f"{args.out}.coverage.json"
    json_dump(hist.coverage.to_dict(), cov_path)
    _emit_manifest(
        args,
        "histogram",
        {
            "embeddings": args.embeddings,
            "lexicon": args.lexicon,
            "out": args.out,
            "bins": args.bins,
            "include_self": not args.exclude_self,
            "keep_zero_entries": args.keep_zero_entries,
        },
        [args.embeddings, args.lexicon],
    )
    return 0


def _expansion_inputs(args):
    table = load_embeddings(args.embeddings)
    lexicon = _read_lexicon(args.lexicon, args.keep_zero_entries, args.lexicon_format)
    model = load_model(args.model)
    if model.stats is None:
        raise FormatError("model file carries no cluster stats", path=args.model)
    candidates = _read_wordlist(args.candidates)
    return table, lexicon, model, candidates


def _report_dict(result) -> dict:
    order = {e: i for i, e in enumerate(result.expanded_lexicon.categories)}
    assignments = sorted(
        result.assignments, key=lambda a: (a.word, order[a.emotion])
    )
    return {
        "theta": result.theta,
        "assignments": [
            {"word": a.word, "emotion": a.emotion, "nearest": a.nearest, "sim": a.sim}
            for a in assignments
        ],
        "diagnostics": result.diagnostics.to_dict(),
        "coverage": {
            "candidates": result.candidate_coverage.to_dict(),
            "lexicon": result.lexicon_coverage.to_dict(),
        },
        "unexpandable_emotions": result.unexpandable_emotions,
        "skipped_in_seed": result.skipped_in_seed,
        "tool_version": __version__,
    }


def cmd_expand(args) -> int:
    if not 0.0 < args.theta < 1.0:
        raise UsageError(f"theta must lie in (0, 1), got {args.theta}")
    table, lexicon, model, candidates = _expansion_inputs(args)
    threads = resolve_threads(args.threads)
    result = expand_at(
        candidates, lexicon, table, model, model.stats, theta=args.theta,
        threads=threads,
    )
    save_lexicon(result.expanded_lexicon, args.out, format="jsonl")
    report_path = args.report or f"{args.out}.report.json"
    json_dump(_report_dict(result), report_path)
    _emit_manifest(
        args,
        "expand",
        {
            "embeddings": args.embeddings,
            "lexicon": args.lexicon,
            "model": args.model,
            "candidates": args.candidates,
            "out": args.out,
            "theta": args.theta,
            "keep_zero_entries": args.keep_zero_entries,
        },
        [args.embeddings, args.lexicon, args.model, args.candidates],
    )
    return 0


def cmd_sweep(args) -> int:
    table, lexicon, model, candidates = _expansion_inputs(args)
    threads = resolve_threads(args.threads)
    report = sweep(
        candidates,
        lexicon,
        table,
        model,
        model.stats,
        theta_min=args.theta_min,
        theta_max=args.theta_max,
        step=args.theta_step,
        threads=threads,
    )
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.to_csv())
    _emit_manifest(
        args,
        "sweep",
        {
            "embeddings": args.embeddings,
            "lexicon": args.lexicon,
            "model": args.model,
            "candidates": args.candidates,
            "out": args.out,
            "theta_min": args.theta_min,
            "theta_max": args.theta_max,
            "theta_step": args.theta_step,
            "keep_zero_entries": args.keep_zero_entries,
        },
        [args.embeddings, args.lexicon, args.model, args.candidates],
    )
    return 0


def cmd_features(args) -> int:
    if args.mode not in AGGREGATION_MODES:
        raise UsageError(f"--mode must be one of {AGGREGATION_MODES}")
    lexicon = _read_lexicon(args.lexicon, args.keep_zero_entries, args.lexicon_format)
    records = read_records(args.corpus)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            feats = emotion_features(rec.text, lexicon, mode=args.mode)
            fh.write(
                json.dumps(
                    {
                        "id": rec.id,
                        "f_emo": list(feats.values),
                        "token_count": feats.token_count,
                        "matched_count": feats.matched_count,
                    },
                    ensure_ascii=False,
                    sort_keys=True,
                )
                + "\n"
            )
    _emit_manifest(
        args,
        "features",
        {
            "lexicon": args.lexicon,
            "corpus": args.corpus,
            "out": args.out,
            "mode": args.mode,
            "keep_zero_entries": args.keep_zero_entries,
        },
        [args.lexicon, args.corpus],
    )
    return 0


def cmd_corpus_convert(args) -> int:
    fields = FieldMap(
        id_field=args.id_field,
        topic_field=args.topic_field,
        text_field=args.text_field,
        label_field=args.label_field,
    )
    total_records = 0
    total_rows = 0
    total_skipped = 0
    all_errors: list[str] = []
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for path in args.inputs:
            outcome = convert(read_jsonl(path), args.source, fields)
            for err in outcome.errors:
                print(f"error: {path}: {err}", file=sys.stderr)
            all_errors.extend(outcome.errors)
            total_rows += outcome.total_rows
            total_skipped += outcome.skipped
            total_records += len(outcome.records)
            for rec in outcome.records:
                fh.write(rec.to_json() + "\n")
    print(
        f"converted {total_records} records ({total_skipped} skipped, "
        f"{len(all_errors)} bad rows)",
        file=sys.stderr,
    )
    if total_rows > 0 and total_records == 0 and total_skipped == 0:
        raise FormatError("all input rows failed conversion")
    _emit_manifest(
        args,
        "corpus-convert",
        {
            "inputs": list(args.inputs),
            "source": args.source,
            "out": args.out,
            "id_field": args.id_field,
            "topic_field": args.topic_field,
            "text_field": args.text_field,
            "label_field": args.label_field,
        },
        list(args.inputs),
    )
    return 0


def cmd_corpus_stats(args) -> int:
    records = read_records(args.input)
    st = stats(records)
    json_dump(st.to_dict(), args.out)
    _emit_manifest(
        args,
        "corpus-stats",
        {"in": args.input, "out": args.out},
        [args.input],
    )
    return 0


def _add_common(p, lexicon=True):
    if lexicon:
        p.add_argument("--lexicon", required=True, help="seed lexicon (tsv or jsonl)")
        p.add_argument(
            "--lexicon-format", choices=("auto", "tsv", "jsonl"), default="auto"
        )
        p.add_argument(
            "--keep-zero-entries",
            action="store_true",
            help="keep words with no emotion flags",
        )
    p.add_argument("--manifest", default=None, help="manifest path override")


def build_parser() -> _Parser:
    parser = _Parser(prog="elex", description=__doc__)
    parser.add_argument("--version", action="version", version=f"elex {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("cluster", help="fit the PCA+GMM model and similarity stats")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out", required=True, help="cluster model JSON")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--pca-dim", type=int, default=DEFAULT_PCA_DIM)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--reg", type=float, default=1e-6)
    p.add_argument("--restarts", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("histogram", help="per-emotion raw similarity histogram CSV")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out", required=True, help="histogram CSV")
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--exclude-self", action="store_true")
    p.add_argument("--coverage-out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("expand", help="threshold expansion at one theta")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--candidates", required=True, help="wordlist, one per line")
    p.add_argument("--out", required=True, help="expanded lexicon JSONL")
    p.add_argument("--report", default=None, help="expansion report JSON")
    p.add_argument("--theta", type=float, default=DEFAULT_THETA)
    p.add_argument("--threads", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("sweep", help="diagnostics across the theta grid")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--out", required=True, help="sweep CSV")
    p.add_argument("--theta-min", type=float, default=DEFAULT_GRID[0])
    p.add_argument("--theta-max", type=float, default=DEFAULT_GRID[1])
    p.add_argument("--theta-step", type=float, default=DEFAULT_GRID[2])
    p.add_argument("--threads", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("features", help="emotion feature vectors for a corpus")
    p.add_argument("--corpus", required=True, help="unified corpus JSONL")
    p.add_argument("--out", required=True, help="features JSONL")
    p.add_argument("--mode", default="fraction", choices=AGGREGATION_MODES)
    _add_common(p)
    p.set_defaults(func=cmd_features)

    pc = sub.add_parser("corpus", help="stance corpus tools")
    csub = pc.add_subparsers(dest="corpus_cmd", required=True)

    p = csub.add_parser("convert", help="project raw rows onto the unified schema")
    p.add_argument("--in", dest="inputs", action="append", required=True)
    p.add_argument("--source", required=True, choices=("amt", "ukp", "pe", "ibm"))
    p.add_argument("--out", required=True)
    p.add_argument("--id-field", default="id")
    p.add_argument("--topic-field", default="topic")
    p.add_argument("--text-field", default="text")
    p.add_argument("--label-field", default="stance")
    _add_common(p, lexicon=False)
    p.set_defaults(func=cmd_corpus_convert)

    p = csub.add_parser("stats", help="corpus size/label statistics JSON")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    _add_common(p, lexicon=False)
    p.set_defaults(func=cmd_corpus_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except ElexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
