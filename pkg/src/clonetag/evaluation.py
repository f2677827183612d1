"""Enumeration of tag-consistent clusterings and the refinement order.

A usable word tag pins down its cluster exactly: the cluster must contain
every fragment ranking the word in the top `block` and may only contain
fragments ranking it in the top `top`, so with top <= block the member set
is forced to the top-`top` holder set and the word is usable only when the
two holder sets coincide.  Filenames always induce the set of fragments
bearing the basename.  Every tag-consistent clustering is therefore an exact
cover of the clone class by such groups, which a budgeted recursive search
enumerates.

Clusterings of the same fragment set are compared by refinement: C <= D when
fragments sharing a cluster in C always share one in D.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .clustering import Clustering
from .tagging import DEFAULT_BLOCK, DEFAULT_TOP, ObFList, Tag, TagKind

DEFAULT_NODE_BUDGET = 100_000

Partition = frozenset[frozenset[int]]


class TagUniverse(Enum):
    WORDS_AND_FILENAMES = "words_and_filenames"
    FILENAMES_ONLY = "filenames_only"


class Relation(Enum):
    EQUAL = "equal"
    REFINES = "refines"  # C < D: C is strictly finer
    COARSENS = "coarsens"  # C > D
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class TaggedGroup:
    tag: Tag
    members: frozenset[int]


@dataclass
class EnumerationResult:
    # Each distinct partition maps to one witness tagging (tags by cluster).
    partitions: dict[Partition, tuple[Tag, ...]]
    nodes_expanded: int
    overflow: bool


def candidate_groups(
    fragments: Iterable[int],
    obf: Mapping[int, ObFList],
    basenames: Mapping[int, str],
    universe: TagUniverse = TagUniverse.WORDS_AND_FILENAMES,
    top: int = DEFAULT_TOP,
    block: int = DEFAULT_BLOCK,
) -> list[TaggedGroup]:
    """All tag-induced groups of the clone class, in deterministic order.

    One group per basename (its holders) and, outside the filenames-only
    universe, one per usable word: a word whose top-`top` holder set is
    nonempty and equals its top-`block` holder set.
    """
    fragment_list = sorted(fragments)
    groups: list[TaggedGroup] = []

    holders: dict[str, list[int]] = {}
    for f in fragment_list:
        holders.setdefault(basenames[f], []).append(f)
    for name in sorted(holders):
        groups.append(TaggedGroup(Tag(TagKind.FILENAME, name), frozenset(holders[name])))

    if universe is TagUniverse.WORDS_AND_FILENAMES:
        top_holders: dict[str, set[int]] = {}
        block_holders: dict[str, set[int]] = {}
        for f in fragment_list:
            for text in obf[f].top_texts(block):
                block_holders.setdefault(text, set()).add(f)
                if obf[f].rank(text) <= top:
                    top_holders.setdefault(text, set()).add(f)
        for text in sorted(top_holders):
            if top_holders[text] == block_holders[text]:
                groups.append(TaggedGroup(Tag(TagKind.WORD, text), frozenset(top_holders[text])))
    return groups


def enumerate_tag_clusterings(
    groups: Sequence[TaggedGroup],
    fragments: Iterable[int],
    budget: int = DEFAULT_NODE_BUDGET,
) -> EnumerationResult:
    """Exact covers of the fragment set by pairwise-disjoint tagged groups.

    Covers producing the same partition are deduplicated (one witness tagging
    kept).  Every group-choice attempt counts as one search node; the search
    stops, with overflow set, once the budget is consumed.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    fragment_list = sorted(set(fragments))
    by_fragment: dict[int, list[TaggedGroup]] = {f: [] for f in fragment_list}
    for group in groups:
        for f in group.members:
            if f in by_fragment:
                by_fragment[f].append(group)

    partitions: dict[Partition, tuple[Tag, ...]] = {}
    nodes = 0
    aborted = False

    def search(uncovered: frozenset[int], chosen: tuple[TaggedGroup, ...]) -> None:
        nonlocal nodes, aborted
        if aborted:
            return
        if not uncovered:
            partition = frozenset(g.members for g in chosen)
            if partition not in partitions:
                partitions[partition] = tuple(g.tag for g in chosen)
            return
        pivot = min(uncovered)
        for group in by_fragment[pivot]:
            if nodes >= budget:
                aborted = True
                return
            nodes += 1
            if group.members <= uncovered:
                search(uncovered - group.members, chosen + (group,))
            if aborted:
                return

    search(frozenset(fragment_list), ())
    return EnumerationResult(partitions=partitions, nodes_expanded=nodes, overflow=nodes >= budget)


def _as_partition(value: Clustering | Iterable[Iterable[int]]) -> Partition:
    if isinstance(value, Clustering):
        return value.as_partition()
    return frozenset(frozenset(block) for block in value)


def _leq(finer: Partition, coarser: Partition) -> bool:
    """finer <= coarser: every block of finer is inside some block of coarser."""
    lookup: dict[int, frozenset[int]] = {}
    for block in coarser:
        for element in block:
            lookup[element] = block
    return all(block <= lookup[next(iter(block))] for block in finer)


def compare_clusterings(
    c: Clustering | Iterable[Iterable[int]],
    d: Clustering | Iterable[Iterable[int]],
) -> Relation:
    """Refinement relation between two partitions of the same fragment set."""
    cp, dp = _as_partition(c), _as_partition(d)
    c_elems = frozenset(x for block in cp for x in block)
    d_elems = frozenset(x for block in dp for x in block)
    if c_elems != d_elems:
        raise ValueError("clusterings partition different fragment sets")
    c_le_d = _leq(cp, dp)
    d_le_c = _leq(dp, cp)
    if c_le_d and d_le_c:
        return Relation.EQUAL
    if c_le_d:
        return Relation.REFINES
    if d_le_c:
        return Relation.COARSENS
    return Relation.INCOMPARABLE


@dataclass
class UniverseSummary:
    universe: TagUniverse
    equal: int = 0
    refines_or_equal: int = 0  # exists T with T <= d2v clustering
    coarsens_or_equal: int = 0  # exists T with T >= d2v clustering
    incomparable: int = 0  # exists T incomparable to the d2v clustering
    overflow_classes: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "universe": self.universe.value,
            "equal": self.equal,
            "refines_or_equal": self.refines_or_equal,
            "coarsens_or_equal": self.coarsens_or_equal,
            "incomparable": self.incomparable,
            "overflow_classes": sorted(self.overflow_classes),
        }


@dataclass
class SummaryTable:
    """Counts of clone classes per relation column, one row per tag universe.

    Only clone classes whose embedding-based clustering produced two or more
    clusters participate; each column counts classes for which at least one
    enumerated tag clustering stands in the stated relation.
    """

    denominator: int
    rows: list[UniverseSummary]

    def to_dict(self) -> dict:
        return {"denominator": self.denominator, "rows": [r.to_dict() for r in self.rows]}

    def render_text(self) -> str:
        labels = {
            TagUniverse.WORDS_AND_FILENAMES: "Words and filenames",
            TagUniverse.FILENAMES_ONLY: "Filenames only",
        }
        widths = (22, 9, 9, 9, 9)
        header = "".join(
            text.ljust(w) for text, w in zip(("Clustering w/", "= d2vc", "<= d2vc", ">= d2vc", "!~ d2vc"), widths)
        )
        lines = [header, "".join(("Doc2Vec".ljust(widths[0]), str(self.denominator).ljust(widths[1]), "-".ljust(widths[2]), "-".ljust(widths[3]), "-".ljust(widths[4])))]
        for row in self.rows:
            cells = (labels[row.universe], str(row.equal), str(row.refines_or_equal), str(row.coarsens_or_equal), str(row.incomparable))
            lines.append("".join(c.ljust(w) for c, w in zip(cells, widths)))
        overflow = {labels[r.universe]: len(r.overflow_classes) for r in self.rows if r.overflow_classes}
        if overflow:
            lines.append(f"overflowed enumerations: {overflow}")
        return "\n".join(line.rstrip() for line in lines)


def rq_summary(
    d2v_clusterings: Mapping[int, Clustering],
    enumerations: Mapping[TagUniverse, Mapping[int, EnumerationResult]],
) -> SummaryTable:
    """Table-4-shaped comparison of embedding clusterings against tag clusterings.

    For each universe, a class counts in a column when some enumerated
    partition has the corresponding relation to the class's embedding
    clustering; classes with k < 2 are excluded from all columns and the
    denominator.
    """
    eligible = {cid: cl for cid, cl in d2v_clusterings.items() if cl.k >= 2}
    rows = []
    for universe, per_class in enumerations.items():
        row = UniverseSummary(universe=universe)
        for class_id, clustering in sorted(eligible.items()):
            result = per_class.get(class_id)
            if result is None:
                continue
            if result.overflow:
                row.overflow_classes.append(class_id)
            relations = {
                compare_clusterings(partition, clustering) for partition in result.partitions
            }
            if Relation.EQUAL in relations:
                row.equal += 1
            if relations & {Relation.EQUAL, Relation.REFINES}:
                row.refines_or_equal += 1
            if relations & {Relation.EQUAL, Relation.COARSENS}:
                row.coarsens_or_equal += 1
            if Relation.INCOMPARABLE in relations:
                row.incomparable += 1
        rows.append(row)
    return SummaryTable(denominator=len(eligible), rows=rows)
