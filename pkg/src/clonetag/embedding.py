"""Paragraph-vector document embeddings and the reference-corpus IDF table.

The model is distributed-bag-of-words paragraph vectors trained with
negative sampling: each document vector is nudged toward the output vectors
of its own words and away from noise words drawn from the unigram^0.75
distribution.  Training is plain numpy, single pass per epoch in corpus
order, so a fixed seed reproduces the model bit for bit.

Word identity here is the word text; channels are ignored (a word counts the
same whether it came from an identifier or a comment).
"""

from __future__ import annotations

import dataclasses
import json
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .lexing import WordSequence

_MAGIC = b"CTDM"
_FORMAT_VERSION = 1


class EmbeddingError(Exception):
    pass


@dataclass(frozen=True)
class TrainingParams:
    dimension: int = 100
    epochs: int = 20
    negative: int = 5
    alpha: float = 0.025
    min_alpha: float = 0.0001
    seed: int = 1

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ValueError("dimension must be >= 2")
        if self.epochs < 1 or self.negative < 1:
            raise ValueError("epochs and negative must be >= 1")


@dataclass
class DocEmbeddingModel:
    params: TrainingParams
    vocab: dict[str, int]
    word_counts: list[int]
    doc_vectors: np.ndarray  # (docs, dim) float32
    word_output: np.ndarray  # (vocab, dim) float32
    noise_cdf: np.ndarray = field(repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.noise_cdf is None:
            self.noise_cdf = _noise_cdf(self.word_counts)

    @property
    def dimension(self) -> int:
        return self.params.dimension

    def save(self, path: str | Path) -> None:
        header = json.dumps(
            {
                "params": {
                    "dimension": self.params.dimension,
                    "epochs": self.params.epochs,
                    "negative": self.params.negative,
                    "alpha": self.params.alpha,
                    "min_alpha": self.params.min_alpha,
                    "seed": self.params.seed,
                },
                "vocab": list(self.vocab.keys()),
                "word_counts": self.word_counts,
            },
            sort_keys=True,
            separators=(",", ":"),
        ).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(
                struct.pack(
                    "<IIIII",
                    _FORMAT_VERSION,
                    self.params.dimension,
                    len(self.vocab),
                    self.doc_vectors.shape[0],
                    len(header),
                )
            )
            fh.write(header)
            fh.write(np.ascontiguousarray(self.doc_vectors, dtype="<f4").tobytes())
            fh.write(np.ascontiguousarray(self.word_output, dtype="<f4").tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "DocEmbeddingModel":
        blob = Path(path).read_bytes()
        if blob[:4] != _MAGIC:
            raise EmbeddingError(f"{path}: not a model file (bad magic)")
        version, dim, vocab_size, doc_count, header_len = struct.unpack_from("<IIIII", blob, 4)
        if version != _FORMAT_VERSION:
            raise EmbeddingError(f"{path}: unsupported model version {version}")
        offset = 4 + 20
        header = json.loads(blob[offset : offset + header_len].decode("utf-8"))
        offset += header_len
        doc_bytes = doc_count * dim * 4
        doc_vectors = np.frombuffer(blob, dtype="<f4", count=doc_count * dim, offset=offset).reshape(
            doc_count, dim
        ).copy()
        word_output = np.frombuffer(
            blob, dtype="<f4", count=vocab_size * dim, offset=offset + doc_bytes
        ).reshape(vocab_size, dim).copy()
        params = TrainingParams(**header["params"])
        vocab = {word: i for i, word in enumerate(header["vocab"])}
        return cls(
            params=params,
            vocab=vocab,
            word_counts=list(header["word_counts"]),
            doc_vectors=doc_vectors,
            word_output=word_output,
        )


def _noise_cdf(word_counts: Sequence[int]) -> np.ndarray:
    weights = np.asarray(word_counts, dtype=np.float64) ** 0.75
    return np.cumsum(weights / weights.sum())


def _draw_negatives(rng: np.random.RandomState, cdf: np.ndarray, count: int, avoid: int) -> list[int]:
    negatives: list[int] = []
    while len(negatives) < count:
        idx = int(np.searchsorted(cdf, rng.random_sample()))
        if idx != avoid:
            negatives.append(idx)
    return negatives


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


def _train_step(
    vector: np.ndarray,
    word_output: np.ndarray,
    indices: list[int],
    labels: np.ndarray,
    alpha: float,
    learn_hidden: bool,
) -> None:
    l2 = word_output[indices]
    grad = (labels - _sigmoid(l2 @ vector)) * alpha
    if learn_hidden:
        word_output[indices] += np.outer(grad, vector)
    vector += grad @ l2


def train_doc_model(
    corpus: Sequence[WordSequence],
    params: TrainingParams | None = None,
    seed: int | None = None,
) -> DocEmbeddingModel:
    """Train a PV-DBOW model over the given documents (min-count 1 vocabulary).

    Single-worker and deterministic: the same corpus, params and seed yield a
    bitwise-identical model.
    """
    if params is None:
        params = TrainingParams()
    if seed is not None:
        params = dataclasses.replace(params, seed=seed)
    if not corpus:
        raise EmbeddingError("cannot train a document model on an empty corpus")

    vocab: dict[str, int] = {}
    counts: list[int] = []
    docs: list[list[int]] = []
    for sequence in corpus:
        doc = []
        for text in sequence.texts():
            idx = vocab.setdefault(text, len(vocab))
            if idx == len(counts):
                counts.append(0)
            counts[idx] += 1
            doc.append(idx)
        docs.append(doc)
    if not vocab:
        raise EmbeddingError("corpus contains no words")

    dim = params.dimension
    rng = np.random.RandomState(params.seed)
    doc_vectors = rng.uniform(-0.5 / dim, 0.5 / dim, size=(len(docs), dim)).astype(np.float32)
    word_output = np.zeros((len(vocab), dim), dtype=np.float32)
    cdf = _noise_cdf(counts)
    labels = np.zeros(params.negative + 1, dtype=np.float32)
    labels[0] = 1.0

    total_steps = params.epochs * sum(len(d) for d in docs)
    decay = (params.alpha - params.min_alpha) / max(1, total_steps)
    step = 0
    for _ in range(params.epochs):
        for doc_idx, doc in enumerate(docs):
            vector = doc_vectors[doc_idx]
            for word_idx in doc:
                alpha = max(params.min_alpha, params.alpha - decay * step)
                indices = [word_idx] + _draw_negatives(rng, cdf, params.negative, word_idx)
                _train_step(vector, word_output, indices, labels, alpha, learn_hidden=True)
                step += 1

    model = DocEmbeddingModel(
        params=params,
        vocab=vocab,
        word_counts=counts,
        doc_vectors=doc_vectors,
        word_output=word_output,
        noise_cdf=cdf,
    )
    _assert_finite(model)
    return model


def _assert_finite(model: DocEmbeddingModel) -> None:
    if not (np.isfinite(model.doc_vectors).all() and np.isfinite(model.word_output).all()):
        raise EmbeddingError("model parameters diverged (NaN/Inf after training)")


def infer_vector(
    model: DocEmbeddingModel,
    fragment_words: WordSequence,
    seed: int = 1,
) -> tuple[np.ndarray, bool]:
    """Infer a vector for a new document with word weights held fixed.

    Out-of-vocabulary words are ignored.  Returns (vector, known) where
    known is False when no word was in vocabulary; the vector is then zero.
    """
    word_indices = [model.vocab[t] for t in fragment_words.texts() if t in model.vocab]
    dim = model.dimension
    if not word_indices:
        return np.zeros(dim, dtype=np.float32), False

    params = model.params
    rng = np.random.RandomState(seed)
    vector = rng.uniform(-0.5 / dim, 0.5 / dim, size=dim).astype(np.float32)
    labels = np.zeros(params.negative + 1, dtype=np.float32)
    labels[0] = 1.0
    total_steps = params.epochs * len(word_indices)
    decay = (params.alpha - params.min_alpha) / max(1, total_steps)
    step = 0
    for _ in range(params.epochs):
        for word_idx in word_indices:
            alpha = max(params.min_alpha, params.alpha - decay * step)
            indices = [word_idx] + _draw_negatives(rng, model.noise_cdf, params.negative, word_idx)
            _train_step(vector, model.word_output, indices, labels, alpha, learn_hidden=False)
            step += 1
    return vector, True


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


@dataclass
class IdfTable:
    """Inverse document frequencies over the sampled reference files.

    value(w) = ln((d + 1) / (c(w) + 1)) + 1 where d is the number of files in
    the IDF corpus and c(w) how many of them contain w.  Words never seen get
    c(w) = 0, so lookups are total and every value is positive.
    """

    d: int
    counts: dict[str, int]

    def __post_init__(self) -> None:
        bad = {w: c for w, c in self.counts.items() if not 0 <= c <= self.d}
        if bad:
            raise ValueError(f"document counts outside [0, d]: {bad}")

    def value(self, word: str) -> float:
        return math.log((self.d + 1) / (self.counts.get(word, 0) + 1)) + 1.0

    def values(self) -> dict[str, float]:
        return {w: self.value(w) for w in self.counts}

    def to_dict(self) -> dict:
        return {"d": self.d, "counts": dict(sorted(self.counts.items()))}

    @classmethod
    def from_dict(cls, data: Mapping) -> "IdfTable":
        return cls(d=int(data["d"]), counts=dict(data["counts"]))

    def save(self, path: str | Path) -> None:
        from .corpus import dump_canonical

        Path(path).write_text(dump_canonical(self.to_dict()), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "IdfTable":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def compute_idf(sampled_files: Sequence[WordSequence]) -> IdfTable:
    """Document-frequency table over the sampled reference word sequences."""
    if not sampled_files:
        raise ValueError("IDF corpus is empty")
    counts: dict[str, int] = {}
    for sequence in sampled_files:
        for text in set(sequence.texts()):
            counts[text] = counts.get(text, 0) + 1
    return IdfTable(d=len(sampled_files), counts=counts)
