"""Type-1/2 clone detection over normalized token sequences.

The detector concatenates per-file normalized token sequences with unique
sentinel separators, builds a suffix array plus LCP array, and walks the LCP
interval tree.  Every interval whose common prefix is at least min_tokens
long and that cannot be extended left as a whole group is one clone class:
identical normalized content, maximal length for its occurrence set.

External reports from other detectors can be imported from JSON and merged
with our own runs; classes sharing a physically identical fragment collapse
via union-find.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import ProductCatalog, Role


class CloneImportError(Exception):
    """Fatal problem with an external clone report."""


class DetectionTimeout(Exception):
    """Internal signal: the per-pair wall clock budget ran out."""


@dataclass(frozen=True)
class CodeFragment:
    file_id: int
    begin_line: int
    end_line: int
    role: Role
    # Token offsets into the file's normalized sequence; None for fragments
    # imported from external reports, which only carry line ranges.
    begin_token: int | None = None
    end_token: int | None = None

    def __post_init__(self) -> None:
        if self.begin_line > self.end_line:
            raise ValueError(f"begin_line {self.begin_line} > end_line {self.end_line}")
        if self.begin_token is not None and self.end_token is not None:
            if self.begin_token >= self.end_token:
                raise ValueError("begin_token must be < end_token")

    @property
    def physical_key(self) -> tuple[int, int, int]:
        return (self.file_id, self.begin_line, self.end_line)


@dataclass
class CloneClass:
    class_id: int
    fragments: list[CodeFragment]

    def has_target(self) -> bool:
        return any(f.role is Role.TARGET for f in self.fragments)


@dataclass(frozen=True)
class DetectionParams:
    min_tokens: int = 50
    min_rnr: float = 0.3
    timeout_seconds: float = 300.0

    def __post_init__(self) -> None:
        if self.min_tokens < 2:
            raise ValueError("min_tokens must be >= 2")
        if not 0.0 <= self.min_rnr <= 1.0:
            raise ValueError("min_rnr must be in [0, 1]")


@dataclass(frozen=True)
class TokenizedFile:
    """Normalized token sequence of one catalog file, with per-token lines."""

    file_id: int
    role: Role
    tokens: tuple[str, ...]
    lines: tuple[int, ...]


@dataclass
class DetectionOutcome:
    classes: list[CloneClass]
    timed_out: bool = False


def rnr(fragment_tokens: Sequence[str]) -> float:
    """Distinct-4-gram ratio of a token sequence; 1.0 below 4 tokens.

    Highly repetitive fragments (unrolled tables, generated switch blocks)
    score low and get filtered out of detection results.
    """
    n = len(fragment_tokens)
    if n < 4:
        return 1.0
    grams = [tuple(fragment_tokens[i : i + 4]) for i in range(n - 3)]
    return len(set(grams)) / len(grams)


def _suffix_array(seq: Sequence[int], deadline: float | None = None) -> list[int]:
    """Prefix-doubling suffix array over an integer sequence."""
    n = len(seq)
    # Dense nonnegative starting ranks so -1 can mark "past the end".
    dense = {value: i for i, value in enumerate(sorted(set(seq)))}
    rank = [dense[value] for value in seq]
    sa = sorted(range(n), key=lambda i: rank[i])
    tmp = [0] * n
    k = 1
    while True:
        if deadline is not None and time.monotonic() > deadline:
            raise DetectionTimeout
        key = lambda i: (rank[i], rank[i + k] if i + k < n else -1)
        sa.sort(key=key)
        tmp[sa[0]] = 0
        for idx in range(1, n):
            tmp[sa[idx]] = tmp[sa[idx - 1]] + (key(sa[idx - 1]) != key(sa[idx]))
        rank = tmp[:]
        if rank[sa[-1]] == n - 1:
            break
        k *= 2
    return sa


def _lcp_array(seq: Sequence[int], sa: Sequence[int]) -> list[int]:
    """Kasai LCP construction: lcp[i] = common prefix of sa[i-1] and sa[i]."""
    n = len(seq)
    rank = [0] * n
    for i, s in enumerate(sa):
        rank[s] = i
    lcp = [0] * n
    h = 0
    for i in range(n):
        if rank[i] > 0:
            j = sa[rank[i] - 1]
            while i + h < n and j + h < n and seq[i + h] == seq[j + h]:
                h += 1
            lcp[rank[i]] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


def _lcp_intervals(lcp: Sequence[int]) -> Iterable[tuple[int, int, int]]:
    """Yield (lcp_value, left, right) for every internal LCP-interval node.

    Positions sa[left..right] share a prefix of exactly lcp_value tokens and
    the group cannot be extended to the right (a longer prefix loses members).
    """
    stack: list[tuple[int, int]] = []  # (lcp_value, left boundary)
    n = len(lcp)
    for i in range(1, n + 1):
        cur = lcp[i] if i < n else 0
        left = i - 1
        while stack and stack[-1][0] > cur:
            value, lb = stack.pop()
            yield (value, lb, i - 1)
            left = lb
        if not stack or stack[-1][0] < cur:
            stack.append((cur, left))


def detect_pairwise(
    target_files: Sequence[TokenizedFile],
    reference_files: Sequence[TokenizedFile],
    params: DetectionParams,
) -> DetectionOutcome:
    """Detect clone classes between the target files and one reference product.

    Returns maximal-length groups of matching normalized token subsequences
    (length >= min_tokens) grouped by identical content.  Fragments below the
    RNR threshold are dropped, then classes reduced to fewer than two
    fragments.  If the wall clock exceeds timeout_seconds the pair is
    abandoned: empty result with timed_out set.
    """
    deadline = time.monotonic() + params.timeout_seconds
    files = list(target_files) + list(reference_files)

    # Map token strings to ints; each separator gets a unique negative id so
    # no common prefix can cross a file boundary.
    vocab: dict[str, int] = {}
    seq: list[int] = []
    origin: list[tuple[int, int] | None] = []  # concatenated pos -> (file idx, local idx)
    for file_idx, tf in enumerate(files):
        for local_idx, token in enumerate(tf.tokens):
            code = vocab.setdefault(token, len(vocab))
            seq.append(code)
            origin.append((file_idx, local_idx))
        seq.append(-(file_idx + 1))
        origin.append(None)
    if len(seq) <= 1:
        return DetectionOutcome(classes=[])

    try:
        sa = _suffix_array(seq, deadline)
        lcp = _lcp_array(seq, sa)
        classes: list[CloneClass] = []
        for value, left, right in _lcp_intervals(lcp):
            if value < params.min_tokens:
                continue
            if time.monotonic() > deadline:
                raise DetectionTimeout
            positions = [sa[i] for i in range(left, right + 1)]
            # Group left-maximality: skip if every occurrence is preceded by
            # the same token (the interval shifted left covers it at +1 length).
            predecessors = {seq[p - 1] if p > 0 else None for p in positions}
            if len(predecessors) == 1 and None not in predecessors:
                pred = next(iter(predecessors))
                if pred >= 0:
                    continue
            fragments = []
            for pos in positions:
                frag = _fragment_at(files, origin, pos, value, params)
                if frag is not None:
                    fragments.append(frag)
            fragments = _dedupe_physical(fragments)
            if len(fragments) >= 2:
                classes.append(CloneClass(class_id=len(classes), fragments=fragments))
    except DetectionTimeout:
        return DetectionOutcome(classes=[], timed_out=True)
    return DetectionOutcome(classes=classes)


def _fragment_at(
    files: Sequence[TokenizedFile],
    origin: Sequence[tuple[int, int] | None],
    pos: int,
    length: int,
    params: DetectionParams,
) -> CodeFragment | None:
    start = origin[pos]
    if start is None:
        return None
    file_idx, local = start
    tf = files[file_idx]
    end = local + length  # exclusive; sentinels guarantee it stays in-file
    if params.min_rnr > 0.0 and rnr(tf.tokens[local:end]) < params.min_rnr:
        return None
    return CodeFragment(
        file_id=tf.file_id,
        begin_line=tf.lines[local],
        end_line=tf.lines[end - 1],
        role=tf.role,
        begin_token=local,
        end_token=end,
    )


def _dedupe_physical(fragments: Iterable[CodeFragment]) -> list[CodeFragment]:
    seen: dict[tuple[int, int, int], CodeFragment] = {}
    for frag in fragments:
        seen.setdefault(frag.physical_key, frag)
    return sorted(seen.values(), key=lambda f: (f.file_id, f.begin_line, f.end_line))


def merge_clone_classes(class_lists: Sequence[Sequence[CloneClass]]) -> list[CloneClass]:
    """Union-find merge of classes sharing a physically identical fragment.

    Physical identity is (file_id, begin_line, end_line); the merged class
    holds the union of fragments with physical duplicates collapsed.
    """
    all_classes = [c for classes in class_lists for c in classes]
    parent = list(range(len(all_classes)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    owner: dict[tuple[int, int, int], int] = {}
    for idx, clone_class in enumerate(all_classes):
        for frag in clone_class.fragments:
            key = frag.physical_key
            if key in owner:
                union(owner[key], idx)
            else:
                owner[key] = idx

    grouped: dict[int, list[CodeFragment]] = {}
    for idx, clone_class in enumerate(all_classes):
        grouped.setdefault(find(idx), []).extend(clone_class.fragments)

    merged = []
    for root in sorted(grouped):
        fragments = _dedupe_physical(grouped[root])
        merged.append(CloneClass(class_id=len(merged), fragments=fragments))
    return merged


def filter_target(classes: Sequence[CloneClass]) -> list[CloneClass]:
    """Keep only classes containing at least one target-product fragment."""
    kept = [c for c in classes if c.has_target()]
    return [replace_class_id(c, i) for i, c in enumerate(kept)]


def replace_class_id(clone_class: CloneClass, class_id: int) -> CloneClass:
    return CloneClass(class_id=class_id, fragments=clone_class.fragments)


def import_report(
    path: str | Path,
    catalog: ProductCatalog,
    warnings: list[str] | None = None,
) -> list[CloneClass]:
    """Load clone classes from an external detector's JSON report.

    Schema: ``{"classes": [[{"path": ..., "begin_line": ..., "end_line": ...},
    ...], ...]}`` where ``path`` is either ``<relative_path>`` (if unambiguous
    across products) or ``<product_id>/<relative_path>``.  Classes naming an
    unresolvable path are skipped with a warning; an invalid line range is a
    fatal validation error.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CloneImportError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict) or "classes" not in data:
        raise CloneImportError(f"report {path} missing top-level 'classes' list")

    by_path: dict[str, list] = {}
    roles = {p.product_id: p.role for p in catalog.products}
    for record in catalog.files:
        by_path.setdefault(record.relative_path, []).append(record)
        by_path.setdefault(f"{record.product_id}/{record.relative_path}", []).append(record)

    classes: list[CloneClass] = []
    for entry in data["classes"]:
        fragments = []
        resolvable = True
        for item in entry:
            begin, end = int(item["begin_line"]), int(item["end_line"])
            if begin > end:
                raise CloneImportError(
                    f"invalid fragment range {begin}..{end} for {item['path']!r}"
                )
            matches = by_path.get(str(item["path"]), [])
            if len(matches) != 1:
                if warnings is not None:
                    kind = "ambiguous" if matches else "unknown"
                    warnings.append(f"skipping class with {kind} path {item['path']!r}")
                resolvable = False
                continue
            record = matches[0]
            fragments.append(
                CodeFragment(
                    file_id=record.file_id,
                    begin_line=begin,
                    end_line=end,
                    role=roles[record.product_id],
                )
            )
        if not resolvable:
            continue
        fragments = _dedupe_physical(fragments)
        if len(fragments) >= 2:
            classes.append(CloneClass(class_id=len(classes), fragments=fragments))
    return classes
