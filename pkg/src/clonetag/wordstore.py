"""On-disk word-sequence store produced by the words stage.

One JSON-lines record per catalog file, in file_id order:

    {"file_id": 0, "product_id": "acme", "role": "target",
     "relative_path": "src/a.c", "basename": "a.c",
     "words": [["i", "ssl"], ["s", "="]], "lines": [3, 3]}

``words`` holds [channel, text] pairs; ``lines`` is the parallel source line
of each word, which lets later stages slice a fragment's words by line range
without re-tokenizing the sources.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .corpus import ProductCatalog, Role, read_source_text
from .lexing import Channel, Word, WordSequence, tokenize, words_with_lines

WORDS_FILENAME = "words.jsonl"


@dataclass
class FileWords:
    file_id: int
    product_id: str
    role: Role
    relative_path: str
    basename: str
    words: list[Word]
    lines: list[int]

    def sequence(self, begin_line: int | None = None, end_line: int | None = None) -> WordSequence:
        """Word sequence of the whole file or of a line range within it."""
        if begin_line is None and end_line is None:
            last = self.lines[-1] if self.lines else 1
            return WordSequence(self.file_id, 1, last, list(self.words))
        begin = 1 if begin_line is None else begin_line
        end = self.lines[-1] if end_line is None and self.lines else (end_line or begin)
        lo = bisect_left(self.lines, begin)
        hi = bisect_right(self.lines, end)
        return WordSequence(self.file_id, begin, end, self.words[lo:hi])

    def to_record(self) -> dict:
        return {
            "file_id": self.file_id,
            "product_id": self.product_id,
            "role": self.role.value,
            "relative_path": self.relative_path,
            "basename": self.basename,
            "words": [[w.channel.value, w.text] for w in self.words],
            "lines": self.lines,
        }

    @classmethod
    def from_record(cls, record: dict) -> "FileWords":
        return cls(
            file_id=record["file_id"],
            product_id=record["product_id"],
            role=Role(record["role"]),
            relative_path=record["relative_path"],
            basename=record["basename"],
            words=[Word(Channel.from_code(ch), text) for ch, text in record["words"]],
            lines=list(record["lines"]),
        )


def extract_catalog_words(catalog: ProductCatalog) -> Iterator[FileWords]:
    """Tokenize every catalog file and expand it into its word stream."""
    for record in catalog.files:
        text = read_source_text(catalog.file_path(record))
        pairs = words_with_lines(tokenize(text))
        yield FileWords(
            file_id=record.file_id,
            product_id=record.product_id,
            role=catalog.role_of(record),
            relative_path=record.relative_path,
            basename=record.basename,
            words=[w for w, _ in pairs],
            lines=[line for _, line in pairs],
        )


def write_words_dir(path: str | Path, records: Iterable[FileWords]) -> Path:
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / WORDS_FILENAME
    with open(target, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_record(), sort_keys=True, separators=(",", ":")))
            fh.write("\n")
    return target


class WordStore:
    """All word records of a words directory, addressable by file_id."""

    def __init__(self, records: list[FileWords]):
        self.records = sorted(records, key=lambda r: r.file_id)
        self.by_id = {r.file_id: r for r in self.records}

    @classmethod
    def load(cls, path: str | Path) -> "WordStore":
        directory = Path(path)
        target = directory / WORDS_FILENAME if directory.is_dir() else directory
        records = []
        with open(target, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(FileWords.from_record(json.loads(line)))
        return cls(records)

    def reference_records(self) -> list[FileWords]:
        return [r for r in self.records if r.role is Role.REFERENCE]

    def sampled_reference_sequences(self, stride: int) -> list[WordSequence]:
        """Every stride-th reference file's full word sequence (file_id order)."""
        if stride < 1:
            raise ValueError("stride must be >= 1")
        return [r.sequence() for r in self.reference_records()[::stride]]

    def fragment_sequence(self, file_id: int, begin_line: int, end_line: int) -> WordSequence:
        return self.by_id[file_id].sequence(begin_line, end_line)
