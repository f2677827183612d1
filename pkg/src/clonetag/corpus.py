"""Product tree scanning and deterministic corpus sampling.

A pipeline run sees exactly one target product (the code under
investigation) and any number of reference products.  Scanning walks each
product root, keeps files matching the configured extensions and assigns
dense file ids in lexicographic (product_id, relative_path) order so the
catalog is reproducible across platforms.
"""

from __future__ import annotations

import fnmatch
import json
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence


class Role(Enum):
    TARGET = "target"
    REFERENCE = "reference"


class CorpusError(Exception):
    """Fatal catalog construction problem (bad root, empty target, ...)."""


@dataclass(frozen=True)
class Product:
    product_id: str
    role: Role
    root_path: str


@dataclass(frozen=True)
class SourceFileRecord:
    file_id: int
    product_id: str
    relative_path: str
    basename: str
    line_count: int


@dataclass
class ProductCatalog:
    products: list[Product]
    files: list[SourceFileRecord]

    def __post_init__(self) -> None:
        targets = [p for p in self.products if p.role is Role.TARGET]
        if len(targets) != 1:
            raise CorpusError(f"expected exactly one target product, got {len(targets)}")

    @property
    def target(self) -> Product:
        return next(p for p in self.products if p.role is Role.TARGET)

    def product(self, product_id: str) -> Product:
        for p in self.products:
            if p.product_id == product_id:
                return p
        raise KeyError(product_id)

    def role_of(self, record: SourceFileRecord) -> Role:
        return self.product(record.product_id).role

    def reference_files(self) -> list[SourceFileRecord]:
        roles = {p.product_id: p.role for p in self.products}
        return [f for f in self.files if roles[f.product_id] is Role.REFERENCE]

    def file_path(self, record: SourceFileRecord) -> Path:
        return Path(self.product(record.product_id).root_path) / record.relative_path

    def to_dict(self) -> dict:
        return {
            "products": [
                {"product_id": p.product_id, "role": p.role.value, "root_path": p.root_path}
                for p in self.products
            ],
            "files": [
                {
                    "file_id": f.file_id,
                    "product_id": f.product_id,
                    "relative_path": f.relative_path,
                    "basename": f.basename,
                    "line_count": f.line_count,
                }
                for f in self.files
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProductCatalog":
        products = [
            Product(p["product_id"], Role(p["role"]), p["root_path"])
            for p in data["products"]
        ]
        files = [
            SourceFileRecord(
                f["file_id"], f["product_id"], f["relative_path"], f["basename"], f["line_count"]
            )
            for f in data["files"]
        ]
        return cls(products=products, files=files)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(dump_canonical(self.to_dict()), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ProductCatalog":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def dump_canonical(obj: object) -> str:
    """Canonical JSON: sorted keys, tight separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def read_source_text(path: str | Path) -> str:
    """Read a source file, replacing undecodable bytes instead of aborting."""
    return Path(path).read_text(encoding="utf-8", errors="replace")


def _unique_product_id(base: str, taken: set[str]) -> str:
    candidate = base
    suffix = 2
    while candidate in taken:
        candidate = f"{base}-{suffix}"
        suffix += 1
    taken.add(candidate)
    return candidate


def _walk_product(root: Path, extensions: set[str], exclude: Sequence[str]) -> list[str]:
    relpaths = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames.sort()
        for name in sorted(filenames):
            full = Path(dirpath) / name
            if full.is_symlink():
                continue
            if not any(name.endswith(ext) for ext in extensions):
                continue
            rel = full.relative_to(root).as_posix()
            if any(fnmatch.fnmatch(rel, pattern) for pattern in exclude):
                continue
            relpaths.append(rel)
    return relpaths


def scan_products(
    roots: Sequence[tuple[str | Path, Role]],
    extensions: Iterable[str],
    exclude: Sequence[str] = (),
) -> ProductCatalog:
    """Build a catalog of every matching file under the given product roots.

    File ids are assigned in lexicographic (product_id, relative_path) order.
    Symlinks are not followed.  Raises CorpusError for an unreadable root or
    an empty target product.
    """
    ext_set = set(extensions)
    products: list[Product] = []
    taken_ids: set[str] = set()
    per_product_files: list[tuple[Product, list[str]]] = []

    for raw_path, role in roots:
        root = Path(raw_path)
        if not root.is_dir() or not os.access(root, os.R_OK):
            raise CorpusError(f"unreadable product root: {root}")
        product = Product(
            product_id=_unique_product_id(root.name or str(root), taken_ids),
            role=role,
            root_path=str(root),
        )
        products.append(product)
        per_product_files.append((product, _walk_product(root, ext_set, exclude)))

    records: list[SourceFileRecord] = []
    ordered = sorted(
        (
            (product.product_id, rel, product)
            for product, rels in per_product_files
            for rel in rels
        ),
        key=lambda item: (item[0], item[1]),
    )
    for file_id, (product_id, rel, product) in enumerate(ordered):
        text = read_source_text(Path(product.root_path) / rel)
        records.append(
            SourceFileRecord(
                file_id=file_id,
                product_id=product_id,
                relative_path=rel,
                basename=rel.rsplit("/", 1)[-1],
                line_count=len(text.splitlines()),
            )
        )

    catalog = ProductCatalog(products=products, files=records)
    if not any(catalog.role_of(f) is Role.TARGET for f in records):
        raise CorpusError("empty target product: no matching target source files")
    return catalog


def sample_reference_files(catalog: ProductCatalog, stride: int) -> list[SourceFileRecord]:
    """Every stride-th reference file (indices 0, stride, 2*stride, ...).

    Target files are never sampled; reference files keep their catalog
    (lexicographic) order, so the sample is deterministic.
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    refs = catalog.reference_files()
    return refs[::stride]
