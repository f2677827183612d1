import json

import pytest

from clonetag.cli import main


def run_cli(*args):
    return main([str(a) for a in args])


@pytest.fixture(scope="module")
def stage_dir(tmp_path_factory, products_root):
    """Artifacts produced by driving every stage through the CLI."""
    out = tmp_path_factory.mktemp("cli-stages")
    code = run_cli(
        "scan",
        "--target", products_root / "acme",
        "--reference", products_root / "libnet",
        "--reference", products_root / "libmath",
        "--reference", products_root / "libfmt",
        "--ext", ".c,.h",
        "--out", out / "catalog.json",
    )
    assert code == 0
    assert run_cli("words", "--catalog", out / "catalog.json", "--out", out / "words.dir") == 0
    assert run_cli(
        "detect", "--catalog", out / "catalog.json",
        "--min-tokens", 50, "--min-rnr", 0.3, "--timeout", 120,
        "--out", out / "clones.json",
    ) == 0
    assert run_cli(
        "train", "--words", out / "words.dir", "--stride", 2,
        "--dim", 32, "--epochs", 30, "--seed", 1, "--out", out / "model.bin",
    ) == 0
    assert run_cli("idf", "--words", out / "words.dir", "--stride", 2, "--out", out / "idf.json") == 0
    assert run_cli(
        "cluster", "--clones", out / "clones.json", "--words", out / "words.dir",
        "--model", out / "model.bin", "--seed", 1, "--min-silhouette", 0.05,
        "--out", out / "clusters.json",
    ) == 0
    assert run_cli(
        "tag", "--clusters", out / "clusters.json", "--words", out / "words.dir",
        "--idf", out / "idf.json", "--top", 3, "--block", 6, "--out", out / "tags.json",
    ) == 0
    return out


def test_cli_stage_outputs(stage_dir):
    catalog = json.loads((stage_dir / "catalog.json").read_text())
    assert len(catalog["products"]) == 4
    assert len(catalog["files"]) == 24

    clones = json.loads((stage_dir / "clones.json").read_text())
    assert len(clones["classes"]) == 3
    assert clones["timeouts"] == []
    for entry in clones["classes"]:
        assert len(entry["fragments"]) >= 2

    clusters = json.loads((stage_dir / "clusters.json").read_text())
    assert sorted(e["k"] for e in clusters["classes"]) == [1, 2, 2]

    tags = json.loads((stage_dir / "tags.json").read_text())
    rendered = sorted(t for e in tags["classes"] for t in e["rendered"])
    assert "matrix.c" in rendered and "socket.c" in rendered


def test_cli_eval_prints_table(stage_dir, capsys):
    code = run_cli(
        "eval", "--clusters", stage_dir / "clusters.json", "--words", stage_dir / "words.dir",
        "--idf", stage_dir / "idf.json", "--budget", 100000, "--out", stage_dir / "eval.json",
    )
    assert code == 0
    table = capsys.readouterr().out
    assert "Clustering w/" in table
    assert "Doc2Vec" in table
    assert "Words and filenames" in table
    assert "Filenames only" in table
    payload = json.loads((stage_dir / "eval.json").read_text())
    assert payload["summary"]["denominator"] == 2  # the two k>=2 classes


def test_cli_import_roundtrip(stage_dir, tmp_path):
    clones = json.loads((stage_dir / "clones.json").read_text())
    catalog = json.loads((stage_dir / "catalog.json").read_text())
    files = {f["file_id"]: f for f in catalog["files"]}
    external = {
        "classes": [
            [
                {
                    "path": f'{files[f["file_id"]]["product_id"]}/{files[f["file_id"]]["relative_path"]}',
                    "begin_line": f["begin_line"],
                    "end_line": f["end_line"],
                }
                for f in entry["fragments"]
            ]
            for entry in clones["classes"]
        ]
    }
    report_path = tmp_path / "external.json"
    report_path.write_text(json.dumps(external))
    out = tmp_path / "imported.json"
    assert run_cli(
        "import", "--report", report_path, "--format", "json",
        "--catalog", stage_dir / "catalog.json", "--out", out,
    ) == 0
    imported = json.loads(out.read_text())
    got = sorted(
        sorted((f["file_id"], f["begin_line"], f["end_line"]) for f in e["fragments"])
        for e in imported["classes"]
    )
    expected = sorted(
        sorted((f["file_id"], f["begin_line"], f["end_line"]) for f in e["fragments"])
        for e in clones["classes"]
    )
    assert got == expected


def test_cli_run_with_config_and_env_override(tmp_path, products_root, monkeypatch):
    config = tmp_path / "pipeline.toml"
    config.write_text(
        f"""
[corpus]
target = "{products_root / 'acme'}"
references = ["{products_root / 'libnet'}", "{products_root / 'libmath'}", "{products_root / 'libfmt'}"]
extensions = [".c"]

[detect]
min_tokens = 50
timeout_seconds = 120

[embedding]
stride = 2
dimension = 32
epochs = 30
seed = 1

[output]
work_dir = "{tmp_path / 'work'}"
report = "{tmp_path / 'report.json'}"
"""
    )
    monkeypatch.setenv("CLONETAG_DETECT_MIN_RNR", "0.3")
    assert run_cli("run", "--config", config) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert len(report["classes"]) == 3


def test_cli_scan_error_exits_nonzero(tmp_path):
    assert run_cli("scan", "--target", tmp_path / "missing", "--out", tmp_path / "c.json") == 1


def test_cli_rejects_unknown_import_format(stage_dir, tmp_path):
    code = run_cli(
        "import", "--report", tmp_path / "x.json", "--format", "json",
        "--catalog", stage_dir / "catalog.json", "--out", tmp_path / "o.json",
    )
    assert code == 1  # missing report file surfaces as an error exit
