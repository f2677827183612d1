"""Command-line front end: each subcommand drives one pipeline stage.

Stages communicate through files (catalog.json, words.dir, clones.json,
model.bin, idf.json, clusters.json, tags.json, report.json), so any stage
can be re-run in isolation or swapped for an external tool's output.
`run` executes the whole pipeline from a TOML config; `serve` exposes a
finished report over HTTP for the viewer.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import evaluation, pipeline
from .clonedetect import DetectionParams, filter_target, import_report, merge_clone_classes
from .corpus import ProductCatalog, Role, dump_canonical, scan_products
from .embedding import DocEmbeddingModel, IdfTable, TrainingParams, compute_idf, train_doc_model
from .report import InvestigationReport
from .wordstore import WordStore, extract_catalog_words, write_words_dir

log = logging.getLogger("clonetag")


class CliError(Exception):
    pass


def _extensions(raw: str) -> list[str]:
    exts = [e if e.startswith(".") else f".{e}" for e in raw.split(",") if e]
    if not exts:
        raise CliError("no extensions given")
    return exts


def cmd_scan(args: argparse.Namespace) -> None:
    roots = [(args.target, Role.TARGET)] + [(r, Role.REFERENCE) for r in args.reference]
    catalog = scan_products(roots, _extensions(args.ext), args.exclude)
    catalog.save(args.out)
    log.info("catalog: %d products, %d files -> %s", len(catalog.products), len(catalog.files), args.out)


def cmd_words(args: argparse.Namespace) -> None:
    catalog = ProductCatalog.load(args.catalog)
    target = write_words_dir(args.out, extract_catalog_words(catalog))
    log.info("word sequences for %d files -> %s", len(catalog.files), target)


def cmd_detect(args: argparse.Namespace) -> None:
    catalog = ProductCatalog.load(args.catalog)
    params = DetectionParams(
        min_tokens=args.min_tokens, min_rnr=args.min_rnr, timeout_seconds=args.timeout
    )
    classes, timeouts = pipeline.detect_clones(catalog, params, jobs=args.jobs)
    pipeline.save_clones(args.out, classes, timeouts)
    log.info("%d clone classes (%d pair timeouts) -> %s", len(classes), len(timeouts), args.out)


def cmd_import(args: argparse.Namespace) -> None:
    if args.format != "json":
        raise CliError(f"unsupported report format {args.format!r}")
    catalog = ProductCatalog.load(args.catalog)
    warnings: list[str] = []
    classes = import_report(args.report, catalog, warnings)
    for message in warnings:
        log.warning("%s", message)
    classes = filter_target(merge_clone_classes([classes]))
    pipeline.save_clones(args.out, classes, timeouts=[])
    log.info("imported %d clone classes -> %s", len(classes), args.out)


def cmd_train(args: argparse.Namespace) -> None:
    store = WordStore.load(args.words)
    corpus = store.sampled_reference_sequences(args.stride)
    params = TrainingParams(dimension=args.dim, epochs=args.epochs, seed=args.seed)
    model = train_doc_model(corpus, params)
    model.save(args.out)
    log.info(
        "model: %d docs, vocab %d, dim %d -> %s",
        model.doc_vectors.shape[0], len(model.vocab), model.dimension, args.out,
    )


def cmd_idf(args: argparse.Namespace) -> None:
    store = WordStore.load(args.words)
    table = compute_idf(store.sampled_reference_sequences(args.stride))
    table.save(args.out)
    log.info("idf over %d files, %d words -> %s", table.d, len(table.counts), args.out)


def cmd_cluster(args: argparse.Namespace) -> None:
    classes, _ = pipeline.load_clones(args.clones)
    store = WordStore.load(args.words)
    model = DocEmbeddingModel.load(args.model)
    entries = pipeline.cluster_classes(
        classes, store, model,
        seed=args.seed, min_silhouette=args.min_silhouette, restarts=args.restarts,
    )
    pipeline.save_clusters(args.out, entries)
    multi = sum(1 for e in entries if e["k"] >= 2)
    log.info("clustered %d classes (%d with k >= 2) -> %s", len(entries), multi, args.out)


def cmd_tag(args: argparse.Namespace) -> None:
    cluster_entries = pipeline.load_clusters(args.clusters)
    store = WordStore.load(args.words)
    idf = IdfTable.load(args.idf)
    entries = pipeline.tag_classes(cluster_entries, store, idf, top=args.top, block=args.block)
    pipeline.save_tags(args.out, entries)
    tagged = sum(1 for e in entries for t in e["tags"] if t)
    log.info("assigned %d tags across %d classes -> %s", tagged, len(entries), args.out)


def cmd_eval(args: argparse.Namespace) -> None:
    cluster_entries = pipeline.load_clusters(args.clusters)
    store = WordStore.load(args.words)
    idf = IdfTable.load(args.idf)
    summary, per_class = pipeline.evaluate_classes(
        cluster_entries, store, idf, budget=args.budget, top=args.top, block=args.block
    )
    payload = {"summary": summary.to_dict(), "classes": per_class}
    Path(args.out).write_text(dump_canonical(payload), encoding="utf-8")
    print(summary.render_text())
    log.info("evaluation -> %s", args.out)


def cmd_run(args: argparse.Namespace) -> None:
    config = pipeline.load_config(args.config)
    if args.bundle:
        config.bundle = True
    report = pipeline.run_pipeline(config)
    log.info(
        "pipeline complete: %d classes, %d files",
        len(report.classes), len(report.files),
    )


def cmd_serve(args: argparse.Namespace) -> None:
    from . import service

    report = InvestigationReport.load(args.report)
    source_root = Path(args.source_root) if args.source_root else None
    ui_dir = Path(args.ui_dir) if args.ui_dir else _default_ui_dir()
    service.serve(report, source_root, args.bind, ui_dir=ui_dir)


def _default_ui_dir() -> Path | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clonetag",
        description="Detect code clones, cluster clone classes by topic, tag the clusters.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="catalog target/reference product trees")
    p.add_argument("--target", required=True)
    p.add_argument("--reference", action="append", default=[], metavar="DIR")
    p.add_argument("--ext", default=".c,.h", help="comma-separated extensions")
    p.add_argument("--exclude", action="append", default=[], metavar="GLOB")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("words", help="extract per-file word sequences")
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", required=True, metavar="WORDS_DIR")
    p.set_defaults(func=cmd_words)

    p = sub.add_parser("detect", help="detect clone classes (target vs each reference product)")
    p.add_argument("--catalog", required=True)
    p.add_argument("--min-tokens", type=int, default=50)
    p.add_argument("--min-rnr", type=float, default=0.3)
    p.add_argument("--timeout", type=float, default=300.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("import", help="import an external clone report")
    p.add_argument("--report", required=True)
    p.add_argument("--format", default="json", choices=["json"])
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("train", help="train the document-embedding model")
    p.add_argument("--words", required=True)
    p.add_argument("--stride", type=int, default=20)
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("idf", help="compute the reference-corpus IDF table")
    p.add_argument("--words", required=True)
    p.add_argument("--stride", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_idf)

    p = sub.add_parser("cluster", help="embed and cluster each clone class")
    p.add_argument("--clones", required=True)
    p.add_argument("--words", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--min-silhouette", type=float, default=0.05)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--jobs", type=int, default=1, help="accepted for symmetry; clustering runs serially")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("tag", help="assign one tag per cluster")
    p.add_argument("--clusters", required=True)
    p.add_argument("--words", required=True)
    p.add_argument("--idf", required=True)
    p.add_argument("--top", type=int, default=3)
    p.add_argument("--block", type=int, default=6)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("eval", help="compare embedding clusterings with all tag clusterings")
    p.add_argument("--clusters", required=True)
    p.add_argument("--words", required=True)
    p.add_argument("--idf", required=True)
    p.add_argument("--budget", type=int, default=evaluation.DEFAULT_NODE_BUDGET)
    p.add_argument("--top", type=int, default=3)
    p.add_argument("--block", type=int, default=6)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("run", help="run the full pipeline from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--bundle", action="store_true", help="inline source text into the report")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("serve", help="serve a report over HTTP")
    p.add_argument("--report", required=True)
    p.add_argument("--source-root", default="")
    p.add_argument("--bind", default="127.0.0.1:8877")
    p.add_argument("--ui-dir", default="", help="static viewer bundle directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except Exception as exc:  # surface stage/validation errors as exit status
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
