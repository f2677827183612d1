import math
import random

import numpy as np
import pytest

from clonetag.embedding import (
    DocEmbeddingModel,
    EmbeddingError,
    IdfTable,
    TrainingParams,
    compute_idf,
    cosine,
    infer_vector,
    train_doc_model,
)
from clonetag.lexing import Channel, Word, WordSequence

from oracles import idf_reference


def doc(words, file_id=0):
    return WordSequence(
        file_id=file_id,
        begin_line=1,
        end_line=1,
        words=[Word(Channel.IDENTIFIER, w) for w in words],
    )


TOPIC_A = ["socket", "send", "recv", "bind", "listen", "accept", "packet", "port"]
TOPIC_B = ["matrix", "row", "column", "det", "inverse", "scale", "pivot", "rank"]


def two_topic_corpus(per_topic=50, words_per_doc=30, seed=99):
    rng = random.Random(seed)
    docs = []
    for i in range(per_topic):
        docs.append(doc([rng.choice(TOPIC_A) for _ in range(words_per_doc)], file_id=i))
    for i in range(per_topic):
        docs.append(doc([rng.choice(TOPIC_B) for _ in range(words_per_doc)], file_id=per_topic + i))
    return docs


SMALL_PARAMS = TrainingParams(dimension=16, epochs=10, seed=7)


def test_training_is_bitwise_deterministic():
    corpus = two_topic_corpus(per_topic=5, words_per_doc=20)
    first = train_doc_model(corpus, SMALL_PARAMS)
    second = train_doc_model(corpus, SMALL_PARAMS)
    assert np.array_equal(first.doc_vectors, second.doc_vectors)
    assert np.array_equal(first.word_output, second.word_output)
    assert first.vocab == second.vocab


def test_saved_models_are_bitwise_identical(tmp_path):
    corpus = two_topic_corpus(per_topic=5, words_per_doc=20)
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    train_doc_model(corpus, SMALL_PARAMS).save(a)
    train_doc_model(corpus, SMALL_PARAMS).save(b)
    assert a.read_bytes() == b.read_bytes()


def test_model_roundtrip(tmp_path):
    corpus = two_topic_corpus(per_topic=4, words_per_doc=15)
    model = train_doc_model(corpus, SMALL_PARAMS)
    path = tmp_path / "model.bin"
    model.save(path)
    loaded = DocEmbeddingModel.load(path)
    assert loaded.vocab == model.vocab
    assert np.array_equal(loaded.doc_vectors, model.doc_vectors)
    assert np.array_equal(loaded.word_output, model.word_output)
    assert loaded.params == model.params
    vec_a, _ = infer_vector(model, corpus[0], seed=3)
    vec_b, _ = infer_vector(loaded, corpus[0], seed=3)
    assert np.array_equal(vec_a, vec_b)


def test_two_topic_corpus_separates():
    corpus = two_topic_corpus()
    model = train_doc_model(corpus, TrainingParams(dimension=32, epochs=15, seed=11))
    vectors = [infer_vector(model, d, seed=5)[0] for d in corpus]
    half = len(corpus) // 2
    intra, inter = [], []
    for i in range(len(corpus)):
        for j in range(i + 1, len(corpus)):
            same = (i < half) == (j < half)
            (intra if same else inter).append(cosine(vectors[i], vectors[j]))
    assert np.mean(intra) > np.mean(inter)


def test_all_parameters_finite_after_training():
    corpus = two_topic_corpus()
    model = train_doc_model(corpus, TrainingParams(dimension=24, epochs=12, seed=3))
    assert np.isfinite(model.doc_vectors).all()
    assert np.isfinite(model.word_output).all()


def test_empty_corpus_is_fatal():
    with pytest.raises(EmbeddingError):
        train_doc_model([], SMALL_PARAMS)


def test_single_document_corpus():
    model = train_doc_model([doc(["alpha", "beta", "alpha"])], SMALL_PARAMS)
    vector, known = infer_vector(model, doc(["alpha", "beta"]), seed=2)
    assert known
    assert vector.shape == (16,)
    assert np.isfinite(vector).all()


def test_inference_deterministic_and_seed_sensitive():
    corpus = two_topic_corpus(per_topic=5, words_per_doc=20)
    model = train_doc_model(corpus, SMALL_PARAMS)
    again, _ = infer_vector(model, corpus[0], seed=4)
    same, _ = infer_vector(model, corpus[0], seed=4)
    assert np.array_equal(again, same)


def test_inference_prefers_matching_training_document():
    corpus = two_topic_corpus(per_topic=20, words_per_doc=25)
    model = train_doc_model(corpus, TrainingParams(dimension=24, epochs=15, seed=13))
    probe, known = infer_vector(model, corpus[0], seed=9)
    assert known
    same_doc = cosine(probe, model.doc_vectors[0])
    disjoint_doc = cosine(probe, model.doc_vectors[len(corpus) - 1])
    assert same_doc > disjoint_doc


def test_inference_ignores_oov_and_flags_all_oov():
    model = train_doc_model([doc(["alpha", "beta"])], SMALL_PARAMS)
    mixed, known = infer_vector(model, doc(["alpha", "unseen"]), seed=2)
    only_known, _ = infer_vector(model, doc(["alpha"]), seed=2)
    assert known
    assert np.array_equal(mixed, only_known)
    zero, flagged = infer_vector(model, doc(["nothing", "matches"]), seed=2)
    assert not flagged
    assert not zero.any()


def test_vocabulary_lookup_total():
    corpus = two_topic_corpus(per_topic=3, words_per_doc=10)
    model = train_doc_model(corpus, SMALL_PARAMS)
    seen = {w for d in corpus for w in d.texts()}
    assert seen == set(model.vocab)
    assert sorted(model.vocab.values()) == list(range(len(seen)))


# --- IDF -------------------------------------------------------------------

def test_idf_single_file_word_value_is_one():
    table = compute_idf([doc(["foo"])])
    assert table.value("foo") == pytest.approx(1.0, abs=1e-12)


def test_idf_d9_c4():
    files = [doc(["shared"] if i < 4 else [f"only{i}"], file_id=i) for i in range(9)]
    table = compute_idf(files)
    assert table.d == 9
    assert table.counts["shared"] == 4
    assert table.value("shared") == pytest.approx(math.log(2) + 1, abs=1e-12)


def test_idf_unseen_word_uses_zero_count():
    table = compute_idf([doc(["foo"])])
    assert table.value("never") == pytest.approx(math.log(2) + 1, abs=1e-12)


def test_idf_counts_files_not_occurrences():
    table = compute_idf([doc(["dup", "dup", "dup"]), doc(["dup", "x"], file_id=1)])
    assert table.counts["dup"] == 2


def test_idf_matches_reference_formula_everywhere():
    for d in range(1, 30):
        files = [doc([f"w{i}"], file_id=i) for i in range(d)]
        table = compute_idf(files)
        for c in range(0, d + 1):
            word = "probe"
            table.counts[word] = c
            assert table.value(word) == pytest.approx(idf_reference(d, c), abs=1e-12)
            del table.counts[word]


def test_idf_monotone_and_positive():
    d = 50
    values = [idf_reference(d, c) for c in range(d + 1)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    table = IdfTable(d=d, counts={"w": d})
    assert table.value("w") > 0


def test_idf_rejects_counts_above_d():
    with pytest.raises(ValueError):
        IdfTable(d=2, counts={"w": 5})


def test_idf_roundtrip(tmp_path):
    table = compute_idf([doc(["a", "b"]), doc(["b"], file_id=1)])
    path = tmp_path / "idf.json"
    table.save(path)
    loaded = IdfTable.load(path)
    assert loaded.d == table.d and loaded.counts == table.counts
