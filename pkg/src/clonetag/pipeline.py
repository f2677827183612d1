"""Pipeline orchestration: scan -> words -> detect -> train/idf -> cluster ->
tag -> report, with per-stage caching in a work directory.

Every stage reads and writes a plain JSON (or binary model) artifact, so any
stage can be re-run or replaced by hand; an existing artifact is reused
rather than recomputed.  Configuration comes from a TOML file whose keys
mirror the CLI flags, with CLONETAG_<SECTION>_<KEY> environment variables
taking precedence.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from . import clonedetect, clustering, embedding, evaluation, tagging
from .clonedetect import CloneClass, CodeFragment, DetectionParams, TokenizedFile
from .corpus import ProductCatalog, Role, dump_canonical, read_source_text, scan_products
from .embedding import DocEmbeddingModel, IdfTable, TrainingParams
from .lexing import normalize_with_lines, tokenize
from .report import InvestigationReport, build_report
from .tagging import Tag
from .wordstore import WordStore, extract_catalog_words, write_words_dir

log = logging.getLogger("clonetag")

ENV_PREFIX = "CLONETAG_"


class PipelineError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage!r} failed: {message}")
        self.stage = stage


@dataclass
class PipelineConfig:
    # [corpus]
    target: str = ""
    references: list[str] = field(default_factory=list)
    extensions: list[str] = field(default_factory=lambda: [".c", ".h"])
    exclude: list[str] = field(default_factory=list)
    # [detect]
    min_tokens: int = 50
    min_rnr: float = 0.3
    timeout_seconds: float = 300.0
    jobs: int = 1
    import_report: str = ""
    # [embedding]
    stride: int = 20
    dimension: int = 100
    epochs: int = 20
    seed: int = 1
    # [clustering]
    cluster_seed: int = 1
    min_silhouette: float = 0.05
    restarts: int = 10
    # [tagging]
    top: int = 3
    block: int = 6
    # [evaluation]
    budget: int = evaluation.DEFAULT_NODE_BUDGET
    # [output]
    work_dir: str = "clonetag-work"
    report: str = ""
    bundle: bool = False

    def detection_params(self) -> DetectionParams:
        return DetectionParams(
            min_tokens=self.min_tokens,
            min_rnr=self.min_rnr,
            timeout_seconds=self.timeout_seconds,
        )

    def training_params(self) -> TrainingParams:
        return TrainingParams(dimension=self.dimension, epochs=self.epochs, seed=self.seed)


_SECTION_FIELDS = {
    "corpus": {"target", "references", "extensions", "exclude"},
    "detect": {"min_tokens", "min_rnr", "timeout_seconds", "jobs", "import_report"},
    "embedding": {"stride", "dimension", "epochs", "seed"},
    "clustering": {"cluster_seed", "min_silhouette", "restarts"},
    "tagging": {"top", "block"},
    "evaluation": {"budget"},
    "output": {"work_dir", "report", "bundle"},
}


def load_config(path: str | Path, environ: Mapping[str, str] | None = None) -> PipelineConfig:
    """Parse a pipeline TOML file and apply CLONETAG_* environment overrides."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    config = PipelineConfig()
    for section, keys in _SECTION_FIELDS.items():
        for key, value in data.get(section, {}).items():
            if key not in keys:
                raise PipelineError("config", f"unknown key {section}.{key}")
            setattr(config, key, value)
    environ = os.environ if environ is None else environ
    for section, keys in _SECTION_FIELDS.items():
        for key in keys:
            env_key = f"{ENV_PREFIX}{section.upper()}_{key.upper()}"
            if env_key in environ:
                setattr(config, key, _coerce(getattr(config, key), environ[env_key]))
    return config


def _coerce(current, raw: str):
    if isinstance(current, bool):
        return raw.lower() in ("1", "true", "yes", "on")
    if isinstance(current, int):
        return int(raw)
    if isinstance(current, float):
        return float(raw)
    if isinstance(current, list):
        return [item for item in raw.split(",") if item]
    return raw


# --- detection stage -------------------------------------------------------

def tokenized_file(catalog: ProductCatalog, file_id: int) -> TokenizedFile:
    record = catalog.files[file_id]
    assert record.file_id == file_id
    tokens, lines = normalize_with_lines(tokenize(read_source_text(catalog.file_path(record))))
    return TokenizedFile(
        file_id=file_id,
        role=catalog.role_of(record),
        tokens=tuple(tokens),
        lines=tuple(lines),
    )


_WORKER_STATE: dict = {}


def _init_detect_worker(catalog_dict: dict, params: DetectionParams) -> None:
    _WORKER_STATE["catalog"] = ProductCatalog.from_dict(catalog_dict)
    _WORKER_STATE["params"] = params


def _detect_one_product(product_id: str) -> tuple[str, bool, list[dict]]:
    catalog: ProductCatalog = _WORKER_STATE["catalog"]
    params: DetectionParams = _WORKER_STATE["params"]
    outcome = _run_pair(catalog, product_id, params)
    return product_id, outcome.timed_out, [_class_to_dict(c) for c in outcome.classes]


def _run_pair(catalog: ProductCatalog, product_id: str, params: DetectionParams):
    target_files = [
        tokenized_file(catalog, f.file_id)
        for f in catalog.files
        if catalog.role_of(f) is Role.TARGET
    ]
    reference_files = [
        tokenized_file(catalog, f.file_id) for f in catalog.files if f.product_id == product_id
    ]
    return clonedetect.detect_pairwise(target_files, reference_files, params)


def detect_clones(
    catalog: ProductCatalog, params: DetectionParams, jobs: int = 1
) -> tuple[list[CloneClass], list[str]]:
    """Run target-vs-each-reference-product detection, merge, filter to target.

    Returns the merged, target-filtered classes plus the ids of reference
    products whose pairwise run timed out.
    """
    reference_ids = [p.product_id for p in catalog.products if p.role is Role.REFERENCE]
    per_run: list[list[CloneClass]] = []
    timeouts: list[str] = []
    if jobs > 1 and len(reference_ids) > 1:
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_init_detect_worker,
            initargs=(catalog.to_dict(), params),
        ) as pool:
            for product_id, timed_out, class_dicts in pool.map(_detect_one_product, reference_ids):
                if timed_out:
                    timeouts.append(product_id)
                per_run.append([_class_from_dict(d, catalog) for d in class_dicts])
    else:
        for product_id in reference_ids:
            outcome = _run_pair(catalog, product_id, params)
            if outcome.timed_out:
                timeouts.append(product_id)
                log.warning("detection timed out for reference product %s", product_id)
            per_run.append(outcome.classes)
    merged = clonedetect.merge_clone_classes(per_run)
    return clonedetect.filter_target(merged), timeouts


def _class_to_dict(clone_class: CloneClass) -> dict:
    return {
        "class_id": clone_class.class_id,
        "fragments": [
            {
                "file_id": f.file_id,
                "begin_line": f.begin_line,
                "end_line": f.end_line,
                "role": f.role.value,
            }
            for f in clone_class.fragments
        ],
    }


def _class_from_dict(data: dict, catalog: ProductCatalog | None = None) -> CloneClass:
    fragments = [
        CodeFragment(
            file_id=f["file_id"],
            begin_line=f["begin_line"],
            end_line=f["end_line"],
            role=Role(f["role"]),
        )
        for f in data["fragments"]
    ]
    return CloneClass(class_id=data["class_id"], fragments=fragments)


def save_clones(path: str | Path, classes: Sequence[CloneClass], timeouts: Sequence[str]) -> None:
    payload = {"classes": [_class_to_dict(c) for c in classes], "timeouts": sorted(timeouts)}
    Path(path).write_text(dump_canonical(payload), encoding="utf-8")


def load_clones(path: str | Path) -> tuple[list[CloneClass], list[str]]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [_class_from_dict(d) for d in data["classes"]], list(data.get("timeouts", []))


# --- clustering stage ------------------------------------------------------

def cluster_classes(
    classes: Sequence[CloneClass],
    store: WordStore,
    model: DocEmbeddingModel,
    seed: int = 1,
    min_silhouette: float = 0.05,
    restarts: int = 10,
) -> list[dict]:
    """Embed each class's fragments and cluster them; returns clusters.json entries."""
    entries = []
    for clone_class in classes:
        vectors = []
        oov = []
        for idx, fragment in enumerate(clone_class.fragments):
            sequence = store.fragment_sequence(
                fragment.file_id, fragment.begin_line, fragment.end_line
            )
            vector, known = embedding.infer_vector(model, sequence, seed=seed)
            if not known:
                oov.append(idx)
            vectors.append(vector)
        result = clustering.cluster_clone_class(
            vectors,
            seed=seed,
            min_silhouette=min_silhouette,
            restarts=restarts,
            class_id=clone_class.class_id,
        )
        entries.append(
            {
                "class_id": clone_class.class_id,
                "k": result.k,
                "silhouette": result.silhouette,
                "fragments": _class_to_dict(clone_class)["fragments"],
                "assignment": [result.assignment[i] for i in range(len(clone_class.fragments))],
                "oov_fragments": oov,
            }
        )
    return entries


def save_clusters(path: str | Path, entries: Sequence[dict]) -> None:
    Path(path).write_text(dump_canonical({"classes": list(entries)}), encoding="utf-8")


def load_clusters(path: str | Path) -> list[dict]:
    return json.loads(Path(path).read_text(encoding="utf-8"))["classes"]


def clustering_from_entry(entry: dict) -> clustering.Clustering:
    return clustering.Clustering(
        class_id=entry["class_id"],
        assignment={i: c for i, c in enumerate(entry["assignment"])},
        k=entry["k"],
        silhouette=entry["silhouette"],
    )


# --- tagging stage ---------------------------------------------------------

def fragment_lexicons(
    entry: dict, store: WordStore, idf: IdfTable
) -> tuple[dict[int, tagging.ObFList], dict[int, str], dict[int, dict]]:
    """Per-fragment ObF lists, basenames and channel counts for one class entry."""
    obf: dict[int, tagging.ObFList] = {}
    basenames: dict[int, str] = {}
    channels: dict[int, dict] = {}
    for idx, fragment in enumerate(entry["fragments"]):
        sequence = store.fragment_sequence(
            fragment["file_id"], fragment["begin_line"], fragment["end_line"]
        )
        obf[idx] = tagging.obf_list(sequence, idf)
        channels[idx] = tagging.channel_counts(sequence)
        basenames[idx] = store.by_id[fragment["file_id"]].basename
    return obf, basenames, channels


def tag_classes(
    cluster_entries: Sequence[dict],
    store: WordStore,
    idf: IdfTable,
    top: int = 3,
    block: int = 6,
) -> list[dict]:
    """Assign tags to every clustered class; returns tags.json entries."""
    entries = []
    for entry in cluster_entries:
        obf, basenames, channels = fragment_lexicons(entry, store, idf)
        assignment = tagging.assign_tags(
            clustering_from_entry(entry), obf, basenames, channels, top=top, block=block
        )
        entries.append(
            {
                "class_id": entry["class_id"],
                "k": entry["k"],
                "tags": [_tag_to_dict(t) for t in assignment.tags],
                "rendered": assignment.rendered(),
            }
        )
    return entries


def _tag_to_dict(tag: Tag | None) -> dict | None:
    if tag is None:
        return None
    return {
        "kind": tag.kind.value,
        "text": tag.text,
        "channel": tag.channel.value if tag.channel else None,
    }


def save_tags(path: str | Path, entries: Sequence[dict]) -> None:
    Path(path).write_text(dump_canonical({"classes": list(entries)}), encoding="utf-8")


def load_tags(path: str | Path) -> list[dict]:
    return json.loads(Path(path).read_text(encoding="utf-8"))["classes"]


# --- evaluation stage ------------------------------------------------------

def evaluate_classes(
    cluster_entries: Sequence[dict],
    store: WordStore,
    idf: IdfTable,
    budget: int = evaluation.DEFAULT_NODE_BUDGET,
    top: int = 3,
    block: int = 6,
) -> tuple[evaluation.SummaryTable, list[dict]]:
    """Enumerate tag clusterings per class and universe; build the summary."""
    d2v = {entry["class_id"]: clustering_from_entry(entry) for entry in cluster_entries}
    enumerations: dict[evaluation.TagUniverse, dict[int, evaluation.EnumerationResult]] = {
        universe: {} for universe in evaluation.TagUniverse
    }
    per_class = []
    for entry in cluster_entries:
        obf, basenames, _ = fragment_lexicons(entry, store, idf)
        fragments = range(len(entry["fragments"]))
        detail = {"class_id": entry["class_id"], "universes": {}}
        for universe in evaluation.TagUniverse:
            groups = evaluation.candidate_groups(
                fragments, obf, basenames, universe=universe, top=top, block=block
            )
            result = evaluation.enumerate_tag_clusterings(groups, fragments, budget=budget)
            enumerations[universe][entry["class_id"]] = result
            detail["universes"][universe.value] = {
                "partition_count": len(result.partitions),
                "nodes_expanded": result.nodes_expanded,
                "overflow": result.overflow,
            }
        per_class.append(detail)
    summary = evaluation.rq_summary(d2v, enumerations)
    return summary, per_class


# --- full pipeline ---------------------------------------------------------

@dataclass
class PipelinePaths:
    work_dir: Path

    @property
    def catalog(self) -> Path:
        return self.work_dir / "catalog.json"

    @property
    def words(self) -> Path:
        return self.work_dir / "words.dir"

    @property
    def clones(self) -> Path:
        return self.work_dir / "clones.json"

    @property
    def model(self) -> Path:
        return self.work_dir / "model.bin"

    @property
    def idf(self) -> Path:
        return self.work_dir / "idf.json"

    @property
    def clusters(self) -> Path:
        return self.work_dir / "clusters.json"

    @property
    def tags(self) -> Path:
        return self.work_dir / "tags.json"

    @property
    def report(self) -> Path:
        return self.work_dir / "report.json"


def run_pipeline(config: PipelineConfig) -> InvestigationReport:
    """Execute every stage, reusing cached work-dir artifacts where present."""
    paths = PipelinePaths(Path(config.work_dir))
    paths.work_dir.mkdir(parents=True, exist_ok=True)

    def stage(name: str, fn):
        try:
            return fn()
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(name, str(exc)) from exc

    if paths.catalog.exists():
        catalog = ProductCatalog.load(paths.catalog)
        log.info("scan: reusing %s", paths.catalog)
    else:
        if not config.target:
            raise PipelineError("scan", "no target directory configured")
        roots = [(config.target, Role.TARGET)] + [(r, Role.REFERENCE) for r in config.references]
        catalog = stage("scan", lambda: scan_products(roots, config.extensions, config.exclude))
        catalog.save(paths.catalog)

    if not (paths.words / "words.jsonl").exists():
        stage("words", lambda: write_words_dir(paths.words, extract_catalog_words(catalog)))
    store = stage("words", lambda: WordStore.load(paths.words))

    if paths.clones.exists():
        classes, timeouts = load_clones(paths.clones)
        log.info("detect: reusing %s", paths.clones)
    elif config.import_report:
        def _import():
            warnings: list[str] = []
            imported = clonedetect.import_report(config.import_report, catalog, warnings)
            for message in warnings:
                log.warning("import: %s", message)
            return clonedetect.filter_target(clonedetect.merge_clone_classes([imported]))
        classes = stage("import", _import)
        timeouts = []
        save_clones(paths.clones, classes, timeouts)
    else:
        classes, timeouts = stage(
            "detect", lambda: detect_clones(catalog, config.detection_params(), config.jobs)
        )
        save_clones(paths.clones, classes, timeouts)

    if paths.model.exists():
        model = DocEmbeddingModel.load(paths.model)
        log.info("train: reusing %s", paths.model)
    else:
        corpus = store.sampled_reference_sequences(config.stride)
        model = stage("train", lambda: embedding.train_doc_model(corpus, config.training_params()))
        model.save(paths.model)

    if paths.idf.exists():
        idf = IdfTable.load(paths.idf)
    else:
        idf = stage(
            "idf",
            lambda: embedding.compute_idf(store.sampled_reference_sequences(config.stride)),
        )
        idf.save(paths.idf)

    if paths.clusters.exists():
        cluster_entries = load_clusters(paths.clusters)
        log.info("cluster: reusing %s", paths.clusters)
    else:
        cluster_entries = stage(
            "cluster",
            lambda: cluster_classes(
                classes,
                store,
                model,
                seed=config.cluster_seed,
                min_silhouette=config.min_silhouette,
                restarts=config.restarts,
            ),
        )
        save_clusters(paths.clusters, cluster_entries)

    if paths.tags.exists():
        tag_entries = load_tags(paths.tags)
        log.info("tag: reusing %s", paths.tags)
    else:
        tag_entries = stage(
            "tag", lambda: tag_classes(cluster_entries, store, idf, config.top, config.block)
        )
        save_tags(paths.tags, tag_entries)

    report = stage(
        "report",
        lambda: build_report(
            catalog,
            merge_class_entries(cluster_entries, tag_entries),
            timeouts=timeouts,
            bundle_source=config.bundle,
        ),
    )
    report_path = Path(config.report) if config.report else paths.report
    report.save(report_path)
    log.info("report written to %s", report_path)
    return report


def merge_class_entries(cluster_entries: Sequence[dict], tag_entries: Sequence[dict]) -> list[dict]:
    """Join clusters.json and tags.json into report class entries."""
    tags_by_class = {entry["class_id"]: entry for entry in tag_entries}
    merged = []
    for entry in cluster_entries:
        tag_entry = tags_by_class.get(entry["class_id"])
        rendered = tag_entry["rendered"] if tag_entry else [f"#{i}" for i in range(entry["k"])]
        tag_dicts = tag_entry["tags"] if tag_entry else [None] * entry["k"]
        counts = [0] * entry["k"]
        fragments = []
        for fragment, cluster in zip(entry["fragments"], entry["assignment"]):
            counts[cluster] += 1
            fragments.append({**fragment, "cluster": cluster})
        merged.append(
            {
                "class_id": entry["class_id"],
                "k": entry["k"],
                "silhouette": entry["silhouette"],
                "fragments": fragments,
                "clusters": [
                    {
                        "index": i,
                        "tag": rendered[i],
                        "kind": tag_dicts[i]["kind"] if tag_dicts[i] else None,
                        "text": tag_dicts[i]["text"] if tag_dicts[i] else None,
                        "channel": tag_dicts[i]["channel"] if tag_dicts[i] else None,
                        "fragment_count": counts[i],
                    }
                    for i in range(entry["k"])
                ],
            }
        )
    return merged
