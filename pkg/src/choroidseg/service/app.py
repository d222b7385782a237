"""FastAPI service wrapping the segmentation pipeline.

Scans are uploaded as raw raster bytes (P5 PGM or grayscale PNG); each
upload is segmented immediately and becomes a session whose boundaries
can be corrected and un-corrected through the API. The correction UI
bundle, when built, is served from the same process.
"""

import os

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from ..errors import ChoroidSegError, DegenerateSelectionError, DimensionError
from ..pipeline import (
    PipelineConfig,
    apply_manual_correction,
    recompute_after_correction,
    result_from_dict,
    result_to_dict,
    segment,
)
from ..scan_io import Layer, load_scan_bytes, sniff_format
from .schemas import CorrectionRequest, HealthResponse, UploadResponse
from .sessions import Session, SessionStore

DEFAULT_UPLOAD_LIMIT = 32 * 1024 * 1024

_MEDIA_TYPES = {"pgm": "image/x-portable-graymap", "png": "image/png"}

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>choroidseg</title></head>
<body><h1>choroidseg service</h1>
<p>The correction UI bundle is not built. API endpoints live under
<code>/api</code>; see the project README.</p></body></html>
"""


def _error(status: int, detail) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(
    cfg: PipelineConfig | None = None,
    upload_limit: int = DEFAULT_UPLOAD_LIMIT,
    static_dir: str | None = None,
) -> FastAPI:
    if cfg is None:
        cfg = PipelineConfig()
    app = FastAPI(title="choroidseg", version="0.1.0")
    store = SessionStore()
    app.state.sessions = store
    app.state.config = cfg

    @app.get("/healthz", response_model=HealthResponse)
    def healthz():
        return HealthResponse()

    @app.post("/api/scans", response_model=UploadResponse, status_code=201)
    async def upload_scan(request: Request):
        chunks = []
        received = 0
        async for chunk in request.stream():
            received += len(chunk)
            if received > upload_limit:
                return _error(413, f"upload exceeds {upload_limit} bytes")
            chunks.append(chunk)
        data = b"".join(chunks)
        fmt = sniff_format(data)
        if fmt is None:
            return _error(422, "body is not a P5 PGM or PNG raster")
        try:
            image = load_scan_bytes(data)
            result = segment(image, cfg)
        except ChoroidSegError as exc:
            return _error(422, str(exc))
        session = Session(
            scan_bytes=data,
            media_type=_MEDIA_TYPES[fmt],
            image=image,
            results=[result_to_dict(result)],
        )
        session_id = store.create(session)
        return JSONResponse(status_code=201, content={"session_id": session_id})

    @app.get("/api/scans/{session_id}")
    def get_scan(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        return Response(content=session.scan_bytes, media_type=session.media_type)

    @app.get("/api/scans/{session_id}/result")
    def get_result(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        return JSONResponse(content=session.current)

    @app.post("/api/scans/{session_id}/corrections")
    def post_correction(session_id: str, correction: CorrectionRequest):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        layer = Layer(correction.layer)
        rows, cols = session.image.rows, session.image.cols
        for name, pt in (("a", correction.a), ("b", correction.b)):
            if pt.col >= cols or pt.row >= rows:
                return _error(
                    422,
                    [{"loc": ["body", name], "msg": f"point outside {rows}x{cols} scan"}],
                )
        with session.lock:
            current = result_from_dict(session.current)
            boundary = current.rpe if layer == Layer.RPE else current.choroid
            try:
                corrected = apply_manual_correction(
                    boundary,
                    (correction.a.col, correction.a.row),
                    (correction.b.col, correction.b.row),
                )
            except (DegenerateSelectionError, DimensionError) as exc:
                return _error(422, [{"loc": ["body"], "msg": str(exc)}])
            updated = recompute_after_correction(
                current, layer, corrected, session.image.axial_resolution_um
            )
            session.results.append(result_to_dict(updated))
            return JSONResponse(content=session.current)

    @app.post("/api/scans/{session_id}/undo")
    def post_undo(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            if len(session.results) < 2:
                return _error(409, "nothing to undo")
            session.results.pop()
            return JSONResponse(content=session.current)

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app
