"""Per-fragment ObF word lists and cluster tag assignment.

A cluster's tag is either the one filename all of its fragments share (and
nobody else has), or a single word that ranks in the top of the TF-IDF
ordering for every fragment in the cluster while staying out of the top of
every fragment outside it.  Filenames win over words when both exist; word
ties are broken by mean TF-IDF over the cluster, then lexicographically.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .clustering import Clustering
from .embedding import IdfTable
from .lexing import Channel, WordSequence

# Channels whose words may appear in ObF lists (and hence become tags);
# symbols and digit strings make no sense as tags.
TAGGABLE_CHANNELS = (Channel.IDENTIFIER, Channel.COMMENT, Channel.LITERAL)

DEFAULT_TOP = 3
DEFAULT_BLOCK = 6


class TagKind(Enum):
    WORD = "word"
    FILENAME = "filename"


@dataclass(frozen=True)
class Tag:
    kind: TagKind
    text: str
    # Presentation detail only: two word tags with the same text are the same
    # tag no matter which channel dominates, so channel stays out of eq/hash.
    channel: Channel | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ObfEntry:
    text: str
    tfidf: float
    rank: int


@dataclass
class ObFList:
    """Words of one fragment, TF-IDF descending, competition-ranked.

    Ties share the smaller rank and the next rank skips (1, 2, 2, 4, ...);
    exact ties are ordered lexicographically for display determinism.
    """

    entries: list[ObfEntry]
    _rank_of: dict[str, int] = field(default_factory=dict, repr=False)
    _tfidf_of: dict[str, float] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._rank_of:
            self._rank_of = {e.text: e.rank for e in self.entries}
            self._tfidf_of = {e.text: e.tfidf for e in self.entries}

    @classmethod
    def from_scores(cls, scores: Mapping[str, float]) -> "ObFList":
        ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        entries = []
        for position, (text, score) in enumerate(ordered):
            if entries and score == entries[-1].tfidf:
                rank = entries[-1].rank
            else:
                rank = position + 1
            entries.append(ObfEntry(text=text, tfidf=score, rank=rank))
        return cls(entries=entries)

    def rank(self, text: str) -> int | None:
        return self._rank_of.get(text)

    def tfidf(self, text: str) -> float:
        return self._tfidf_of.get(text, 0.0)

    def top_texts(self, limit: int) -> list[str]:
        return [e.text for e in self.entries if e.rank <= limit]


def obf_list(fragment_words: WordSequence, idf: IdfTable) -> ObFList:
    """TF-IDF ranking of the fragment's alphabetic words.

    tfidf(w) = (occurrences of w in the fragment) * idf(w), counting word
    text across the identifier/comment/literal channels.
    """
    counts = Counter(w.text for w in fragment_words.words if w.channel in TAGGABLE_CHANNELS)
    return ObFList.from_scores({text: tf * idf.value(text) for text, tf in counts.items()})


def channel_counts(fragment_words: WordSequence) -> dict[str, Counter]:
    """Per word text, how often it occurred through each taggable channel."""
    out: dict[str, Counter] = {}
    for word in fragment_words.words:
        if word.channel in TAGGABLE_CHANNELS:
            out.setdefault(word.text, Counter())[word.channel] += 1
    return out


def word_candidates(
    cluster: Iterable[int],
    others: Iterable[int],
    obf: Mapping[int, ObFList],
    top: int = DEFAULT_TOP,
    block: int = DEFAULT_BLOCK,
) -> set[str]:
    """Words ranked <= top in every cluster fragment and > block (or absent)
    in every fragment of the other clusters."""
    cluster = list(cluster)
    others = list(others)
    if not cluster:
        return set()
    candidates = set(obf[cluster[0]].top_texts(top))
    for fragment in cluster[1:]:
        candidates &= set(obf[fragment].top_texts(top))
        if not candidates:
            return candidates
    for fragment in others:
        ranks = obf[fragment]
        candidates = {w for w in candidates if (ranks.rank(w) or block + 1) > block}
    return candidates


def filename_candidate(
    cluster: Iterable[int],
    others: Iterable[int],
    basenames: Mapping[int, str],
) -> str | None:
    """The shared basename of the cluster, unless any outside fragment has it."""
    names = {basenames[f] for f in cluster}
    if len(names) != 1:
        return None
    name = names.pop()
    if any(basenames[f] == name for f in others):
        return None
    return name


@dataclass
class TagAssignment:
    class_id: int
    tags: list[Tag | None]  # indexed by cluster; None = untagged

    def rendered(self) -> list[str]:
        return [render_tag(tag) if tag else f"#{i}" for i, tag in enumerate(self.tags)]


def _majority_channel(
    cluster: Sequence[int],
    text: str,
    channels: Mapping[int, Mapping[str, Counter]] | None,
) -> Channel:
    if channels is None:
        return Channel.IDENTIFIER
    totals: Counter = Counter()
    for fragment in cluster:
        totals.update(channels.get(fragment, {}).get(text, {}))
    if not totals:
        return Channel.IDENTIFIER
    precedence = {Channel.IDENTIFIER: 0, Channel.COMMENT: 1, Channel.LITERAL: 2}
    return max(totals, key=lambda ch: (totals[ch], -precedence[ch]))


def assign_tags(
    clustering: Clustering,
    obf: Mapping[int, ObFList],
    basenames: Mapping[int, str],
    channels: Mapping[int, Mapping[str, Counter]] | None = None,
    top: int = DEFAULT_TOP,
    block: int = DEFAULT_BLOCK,
) -> TagAssignment:
    """One tag per cluster: filename if possible, else the best word candidate.

    Word candidates are ordered by mean TF-IDF over the cluster (ties
    lexicographic).  Tags are kept pairwise distinct within the clone class;
    a cluster whose only candidates are already taken stays untagged.
    """
    all_fragments = set(clustering.assignment)
    clusters = clustering.clusters()
    used: set[Tag] = set()
    tags: list[Tag | None] = []
    for members_set in clusters:
        members = sorted(members_set)
        others = sorted(all_fragments - members_set)
        tag: Tag | None = None
        filename = filename_candidate(members, others, basenames)
        if filename is not None:
            candidate = Tag(TagKind.FILENAME, filename)
            if candidate not in used:
                tag = candidate
        if tag is None:
            words = word_candidates(members, others, obf, top=top, block=block)
            scored = sorted(
                words,
                key=lambda w: (-sum(obf[f].tfidf(w) for f in members) / len(members), w),
            )
            for text in scored:
                candidate = Tag(TagKind.WORD, text, channel=_majority_channel(members, text, channels))
                if candidate not in used:
                    tag = candidate
                    break
        if tag is not None:
            used.add(tag)
        tags.append(tag)
    return TagAssignment(class_id=clustering.class_id, tags=tags)


_CHANNEL_PREFIX = {
    Channel.IDENTIFIER: "i",
    Channel.COMMENT: "c",
    Channel.LITERAL: "l",
}


def render_tag(tag: Tag) -> str:
    """Word tags render as ``<channel>:<text>`` (i/c/l), filenames bare."""
    if tag.kind is TagKind.FILENAME:
        return tag.text
    prefix = _CHANNEL_PREFIX[tag.channel or Channel.IDENTIFIER]
    return f"{prefix}:{tag.text}"
