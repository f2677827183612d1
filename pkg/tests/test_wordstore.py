from clonetag.corpus import Role, scan_products
from clonetag.lexing import Channel
from clonetag.wordstore import WordStore, extract_catalog_words, write_words_dir


def test_words_roundtrip_and_fragment_slicing(tmp_path):
    src = tmp_path / "prod" / "src"
    src.mkdir(parents=True)
    (src / "a.c").write_text("int alpha;\nbeta = alpha + 1;\n/* note */\n")
    catalog = scan_products([(tmp_path / "prod", Role.TARGET)], {".c"})
    words_dir = tmp_path / "words.dir"
    write_words_dir(words_dir, extract_catalog_words(catalog))

    store = WordStore.load(words_dir)
    record = store.records[0]
    assert record.basename == "a.c"
    assert record.role is Role.TARGET

    full = record.sequence()
    assert [w.text for w in full.words] == ["int", "alpha", ";", "beta", "=", "alpha", "+", "1", ";", "note"]

    line2 = store.fragment_sequence(record.file_id, 2, 2)
    assert [w.text for w in line2.words] == ["beta", "=", "alpha", "+", "1", ";"]
    assert [w.channel for w in line2.words][:2] == [Channel.IDENTIFIER, Channel.SYMBOL]

    line3 = store.fragment_sequence(record.file_id, 3, 3)
    assert [(w.channel, w.text) for w in line3.words] == [(Channel.COMMENT, "note")]


def test_sampled_reference_sequences_stride(tmp_path):
    for name, role in [("tgt", Role.TARGET), ("ref", Role.REFERENCE)]:
        d = tmp_path / name
        d.mkdir()
        for i in range(5 if role is Role.REFERENCE else 1):
            (d / f"f{i}.c").write_text(f"int x{i};\n")
    catalog = scan_products(
        [(tmp_path / "tgt", Role.TARGET), (tmp_path / "ref", Role.REFERENCE)], {".c"}
    )
    store = WordStore.load(write_words_dir(tmp_path / "w", extract_catalog_words(catalog)))
    assert len(store.sampled_reference_sequences(1)) == 5
    assert len(store.sampled_reference_sequences(2)) == 3
    assert len(store.sampled_reference_sequences(20)) == 1
    # Target files never enter the sampled corpus.
    target_id = next(f.file_id for f in catalog.files if catalog.role_of(f) is Role.TARGET)
    assert all(seq.file_id != target_id for seq in store.sampled_reference_sequences(1))
