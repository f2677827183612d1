"""Self-contained investigation report: classes, clusters, tags, statistics.

The report is the unit of exchange between the pipeline, the HTTP service
and the viewer.  It stores fragment metadata and rendered tags; source text
is resolved from disk on demand unless the report was bundled.
Serialization is canonical JSON, so serialize -> parse -> serialize is
byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import ProductCatalog, dump_canonical

REPORT_VERSION = 1


class ReportError(Exception):
    pass


@dataclass
class ReportStatistics:
    fragments_per_class: dict  # {"max", "min", "mean"} or None values when empty
    clusters_per_class: dict  # same shape, over classes with k >= 2 only

    def to_dict(self) -> dict:
        return {
            "fragments_per_class": self.fragments_per_class,
            "clusters_per_class": self.clusters_per_class,
        }


def _stat_block(values: Sequence[int]) -> dict:
    if not values:
        return {"max": None, "min": None, "mean": None}
    return {
        "max": max(values),
        "min": min(values),
        "mean": sum(values) / len(values),
    }


def compute_statistics(classes: Sequence[dict]) -> ReportStatistics:
    fragment_counts = [len(c["fragments"]) for c in classes]
    cluster_counts = [c["k"] for c in classes if c["k"] >= 2]
    return ReportStatistics(
        fragments_per_class=_stat_block(fragment_counts),
        clusters_per_class=_stat_block(cluster_counts),
    )


@dataclass
class InvestigationReport:
    """Everything a human (or the viewer) needs to walk the clone classes.

    ``classes`` entries: {class_id, k, silhouette, fragments: [{file_id,
    begin_line, end_line, role, cluster}], clusters: [{index, tag, kind,
    channel, fragment_count}]} with ``tag`` already rendered for display.
    ``file_index`` maps file_id -> [[begin_line, end_line, class_id,
    cluster]] sorted by line range.
    """

    products: list[dict]
    files: list[dict]
    classes: list[dict]
    file_index: dict[str, list[list[int]]]
    statistics: ReportStatistics
    timeouts: list[str] = field(default_factory=list)
    version: int = REPORT_VERSION

    def to_dict(self) -> dict:
        return {
            "report_version": self.version,
            "products": self.products,
            "files": self.files,
            "classes": self.classes,
            "file_index": self.file_index,
            "statistics": self.statistics.to_dict(),
            "timeouts": self.timeouts,
        }

    def to_json(self) -> str:
        return dump_canonical(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "InvestigationReport":
        stats = ReportStatistics(
            fragments_per_class=data["statistics"]["fragments_per_class"],
            clusters_per_class=data["statistics"]["clusters_per_class"],
        )
        report = cls(
            products=list(data["products"]),
            files=list(data["files"]),
            classes=list(data["classes"]),
            file_index={k: v for k, v in data["file_index"].items()},
            statistics=stats,
            timeouts=list(data.get("timeouts", [])),
            version=int(data.get("report_version", REPORT_VERSION)),
        )
        report.validate()
        return report

    @classmethod
    def from_json(cls, text: str) -> "InvestigationReport":
        return cls.from_dict(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "InvestigationReport":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def validate(self) -> None:
        """Cross-check the fragment index and statistics against the classes."""
        indexed = {
            (int(file_id), begin, end, class_id, cluster)
            for file_id, entries in self.file_index.items()
            for begin, end, class_id, cluster in entries
        }
        from_classes = {
            (f["file_id"], f["begin_line"], f["end_line"], c["class_id"], f["cluster"])
            for c in self.classes
            for f in c["fragments"]
        }
        if indexed != from_classes:
            raise ReportError("file index disagrees with class fragment lists")
        recomputed = compute_statistics(self.classes)
        if recomputed.to_dict() != self.statistics.to_dict():
            raise ReportError("stored statistics do not match the classes")

    def class_by_id(self, class_id: int) -> dict | None:
        for entry in self.classes:
            if entry["class_id"] == class_id:
                return entry
        return None

    def file_by_id(self, file_id: int) -> dict | None:
        for entry in self.files:
            if entry["file_id"] == file_id:
                return entry
        return None

    def resolve_source_text(self, file_id: int, source_root: Path | None = None) -> str | None:
        """Source text of a file: bundled text, or read from disk.

        Resolution order: inlined text, then <source_root>/<product_id>/
        <relative_path>, then the product root recorded at scan time.
        """
        record = self.file_by_id(file_id)
        if record is None:
            return None
        if record.get("text") is not None:
            return record["text"]
        candidates = []
        if source_root is not None:
            candidates.append(Path(source_root) / record["product_id"] / record["relative_path"])
        root = next(
            (p["root_path"] for p in self.products if p["product_id"] == record["product_id"]),
            None,
        )
        if root:
            candidates.append(Path(root) / record["relative_path"])
        for candidate in candidates:
            if candidate.is_file():
                return candidate.read_text(encoding="utf-8", errors="replace")
        return None


def build_report(
    catalog: ProductCatalog,
    class_entries: Sequence[dict],
    timeouts: Sequence[str] = (),
    bundle_source: bool = False,
) -> InvestigationReport:
    """Assemble and validate a report from pipeline stage outputs."""
    products = [
        {"product_id": p.product_id, "role": p.role.value, "root_path": p.root_path}
        for p in catalog.products
    ]
    files = []
    for record in catalog.files:
        entry = {
            "file_id": record.file_id,
            "product_id": record.product_id,
            "relative_path": record.relative_path,
            "basename": record.basename,
            "line_count": record.line_count,
            "text": None,
        }
        if bundle_source:
            entry["text"] = catalog.file_path(record).read_text(encoding="utf-8", errors="replace")
        files.append(entry)

    file_index: dict[str, list[list[int]]] = {}
    for entry in class_entries:
        for fragment in entry["fragments"]:
            file_index.setdefault(str(fragment["file_id"]), []).append(
                [fragment["begin_line"], fragment["end_line"], entry["class_id"], fragment["cluster"]]
            )
    for entries in file_index.values():
        entries.sort()

    report = InvestigationReport(
        products=products,
        files=files,
        classes=list(class_entries),
        file_index=file_index,
        statistics=compute_statistics(class_entries),
        timeouts=sorted(timeouts),
    )
    report.validate()
    return report
