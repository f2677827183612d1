"""Read-only HTTP API over an investigation report, plus static viewer hosting.

The service never mutates state: the report is loaded once and every request
is answered from it (source text is read from disk on demand).  Tags carry
(class_id, cluster) references in every payload so a UI can use them as
navigation links to the cluster's fragments.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .report import InvestigationReport


class ClusterInfo(BaseModel):
    index: int
    tag: str
    kind: str | None = None
    text: str | None = None
    channel: str | None = None
    fragment_count: int
    class_id: int


class FragmentInfo(BaseModel):
    file_id: int
    begin_line: int
    end_line: int
    role: str
    cluster: int
    class_id: int
    product_id: str
    relative_path: str
    basename: str


class ClassSummary(BaseModel):
    class_id: int
    k: int
    silhouette: float | None = None
    fragment_count: int
    tags: list[str]


class ClassDetail(BaseModel):
    class_id: int
    k: int
    silhouette: float | None = None
    fragments: list[FragmentInfo]
    clusters: list[ClusterInfo]


class ClassPage(BaseModel):
    total: int
    page: int
    page_size: int
    classes: list[ClassSummary]


class FileAnnotation(BaseModel):
    begin_line: int
    end_line: int
    class_id: int
    cluster: int
    tags: list[ClusterInfo]


class FileDetail(BaseModel):
    file_id: int
    product_id: str
    relative_path: str
    basename: str
    line_count: int
    text: str
    fragments: list[FileAnnotation]


class ClusterDetail(BaseModel):
    class_id: int
    index: int
    tag: str
    fragments: list[FragmentInfo]


class StatBlock(BaseModel):
    max: float | None = None
    min: float | None = None
    mean: float | None = None


class Stats(BaseModel):
    class_count: int
    file_count: int
    product_count: int
    fragments_per_class: StatBlock
    clusters_per_class: StatBlock
    timeouts: list[str] = Field(default_factory=list)


def create_app(
    report: InvestigationReport,
    source_root: Path | None = None,
    ui_dir: Path | None = None,
) -> FastAPI:
    app = FastAPI(title="clonetag report service", version="0.1.0")
    files_by_id = {f["file_id"]: f for f in report.files}

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(HTTPException)
    async def _http_error(request: Request, exc: HTTPException):
        return JSONResponse(status_code=exc.status_code, content={"error": exc.detail})

    def clusters_of(entry: dict) -> list[ClusterInfo]:
        return [
            ClusterInfo(**cluster, class_id=entry["class_id"]) for cluster in entry["clusters"]
        ]

    def fragments_of(entry: dict) -> list[FragmentInfo]:
        out = []
        for fragment in entry["fragments"]:
            record = files_by_id[fragment["file_id"]]
            out.append(
                FragmentInfo(
                    **fragment,
                    class_id=entry["class_id"],
                    product_id=record["product_id"],
                    relative_path=record["relative_path"],
                    basename=record["basename"],
                )
            )
        return out

    @app.get("/api/classes", response_model=ClassPage)
    def list_classes(page: int = 1, page_size: int = 50) -> ClassPage:
        if page < 1 or page_size < 1:
            raise HTTPException(status_code=400, detail="page and page_size must be >= 1")
        start = (page - 1) * page_size
        selected = report.classes[start : start + page_size]
        return ClassPage(
            total=len(report.classes),
            page=page,
            page_size=page_size,
            classes=[
                ClassSummary(
                    class_id=entry["class_id"],
                    k=entry["k"],
                    silhouette=entry["silhouette"],
                    fragment_count=len(entry["fragments"]),
                    tags=[c["tag"] for c in entry["clusters"]],
                )
                for entry in selected
            ],
        )

    @app.get("/api/classes/{class_id}", response_model=ClassDetail)
    def class_detail(class_id: int) -> ClassDetail:
        entry = report.class_by_id(class_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown clone class {class_id}")
        return ClassDetail(
            class_id=entry["class_id"],
            k=entry["k"],
            silhouette=entry["silhouette"],
            fragments=fragments_of(entry),
            clusters=clusters_of(entry),
        )

    @app.get("/api/clusters/{class_id}/{index}", response_model=ClusterDetail)
    def cluster_detail(class_id: int, index: int) -> ClusterDetail:
        entry = report.class_by_id(class_id)
        if entry is None or not 0 <= index < entry["k"]:
            raise HTTPException(
                status_code=404, detail=f"unknown cluster {class_id}/{index}"
            )
        members = [
            fragment
            for fragment in fragments_of(entry)
            if fragment.cluster == index
        ]
        return ClusterDetail(
            class_id=class_id,
            index=index,
            tag=entry["clusters"][index]["tag"],
            fragments=members,
        )

    @app.get("/api/files/{file_id}", response_model=FileDetail)
    def file_detail(file_id: int) -> FileDetail:
        record = files_by_id.get(file_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown file {file_id}")
        text = report.resolve_source_text(file_id, source_root)
        if text is None:
            raise HTTPException(status_code=404, detail=f"source text unavailable for file {file_id}")
        annotations = []
        for begin, end, class_id, cluster in report.file_index.get(str(file_id), []):
            entry = report.class_by_id(class_id)
            annotations.append(
                FileAnnotation(
                    begin_line=begin,
                    end_line=end,
                    class_id=class_id,
                    cluster=cluster,
                    tags=clusters_of(entry) if entry else [],
                )
            )
        return FileDetail(
            file_id=file_id,
            product_id=record["product_id"],
            relative_path=record["relative_path"],
            basename=record["basename"],
            line_count=record["line_count"],
            text=text,
            fragments=annotations,
        )

    @app.get("/api/stats", response_model=Stats)
    def stats() -> Stats:
        blocks = report.statistics.to_dict()
        return Stats(
            class_count=len(report.classes),
            file_count=len(report.files),
            product_count=len(report.products),
            fragments_per_class=StatBlock(**blocks["fragments_per_class"]),
            clusters_per_class=StatBlock(**blocks["clusters_per_class"]),
            timeouts=report.timeouts,
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="viewer")

    return app


def serve(
    report: InvestigationReport,
    source_root: Path | None,
    bind_address: str = "127.0.0.1:8877",
    ui_dir: Path | None = None,
) -> None:
    """Run the report service until interrupted."""
    import uvicorn

    host, _, port = bind_address.partition(":")
    app = create_app(report, source_root=source_root, ui_dir=ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8877), log_level="info")
