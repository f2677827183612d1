import sys
import time
from pathlib import Path
from types import SimpleNamespace

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # oracles, fig2 helpers

from clonetag.pipeline import PipelineConfig, PipelinePaths, run_pipeline

FIXTURE_PRODUCTS = Path(__file__).parent / "fixtures" / "products"


@pytest.fixture(scope="session")
def products_root() -> Path:
    if not FIXTURE_PRODUCTS.is_dir():
        pytest.fail("fixture products missing; run tests/fixtures/make_fixture.py")
    return FIXTURE_PRODUCTS


def fixture_config(products_root: Path, work_dir: Path, **overrides) -> PipelineConfig:
    settings = dict(
        target=str(products_root / "acme"),
        references=[str(products_root / p) for p in ("libnet", "libmath", "libfmt")],
        extensions=[".c"],
        min_tokens=50,
        min_rnr=0.3,
        timeout_seconds=120.0,
        stride=2,
        dimension=32,
        epochs=30,
        seed=1,
        cluster_seed=1,
        min_silhouette=0.05,
        work_dir=str(work_dir),
    )
    settings.update(overrides)
    return PipelineConfig(**settings)


@pytest.fixture(scope="session")
def pipeline_run(tmp_path_factory, products_root):
    """The full pipeline executed once on the bundled desk-scale fixture."""
    work_dir = tmp_path_factory.mktemp("pipeline-work")
    config = fixture_config(products_root, work_dir)
    started = time.monotonic()
    report = run_pipeline(config)
    elapsed = time.monotonic() - started
    return SimpleNamespace(
        config=config,
        paths=PipelinePaths(work_dir),
        report=report,
        elapsed_seconds=elapsed,
    )


# --- acceptance summary ------------------------------------------------------

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_acceptance(name: str, passed: bool) -> None:
    _ACCEPTANCE_RESULTS.append((name, "PASS" if passed else "FAIL"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{verdict}] {name}")
