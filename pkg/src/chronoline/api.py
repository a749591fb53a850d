"""HTTP service.

FastAPI wrapper over the in-memory engine: timeline generation (including
zoomed spans via start/end), entity info for pivoting, prefix search, and a
health probe. All errors come back as {"error": ..., "code": ...} with 400
for bad parameters and 404 for unknown entities.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engine import EntityNotFound, TimelineEngine


class SpanModel(BaseModel):
    start: str
    end: str


class SpecModel(BaseModel):
    W: int
    H: int
    w: int
    h: int
    n: int
    t_w: float


class TimelineEventModel(BaseModel):
    re: str
    timestamp: str
    path_to_re: str
    path_to_ts: str
    description: str
    gain: float


class TimelineResponse(BaseModel):
    subject: str
    span: SpanModel
    spec: SpecModel
    objective: float
    events: list[TimelineEventModel]


class ExistenceModel(BaseModel):
    start: str | None
    end: str | None


class EntityInfoResponse(BaseModel):
    name: str
    existence: ExistenceModel | None
    candidate_count: int


class SearchResultModel(BaseModel):
    id: str
    name: str
    candidate_count: int


class ErrorResponse(BaseModel):
    error: str
    code: int


def _error(code: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=code, content={"error": message, "code": code})


def create_app(engine: TimelineEngine, static_dir: "str | Path | None" = None) -> FastAPI:
    app = FastAPI(title="chronoline", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )
    app.state.engine = engine

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        field = ".".join(str(p) for p in errors[0]["loc"]) if errors else "request"
        return _error(400, f"invalid parameter: {field}")

    @app.exception_handler(EntityNotFound)
    async def not_found_handler(request: Request, exc: EntityNotFound):
        return _error(404, f"entity not found: {exc.args[0]}")

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return _error(400, str(exc))

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.get(
        "/api/timeline",
        response_model=TimelineResponse,
        responses={400: {"model": ErrorResponse}, 404: {"model": ErrorResponse}},
    )
    async def timeline(
        entity: str = Query(...),
        start: str | None = Query(None),
        end: str | None = Query(None),
        width: int | None = Query(None, gt=0),
        height: int | None = Query(None, gt=0),
        variant: str | None = Query(None),
    ):
        result = engine.timeline(
            entity, start=start, end=end, width=width, height=height, variant=variant
        )
        return result.to_json_dict()

    @app.get(
        "/api/entity/{entity_id:path}",
        response_model=EntityInfoResponse,
        responses={404: {"model": ErrorResponse}},
    )
    async def entity_info(entity_id: str):
        # Ids conventionally begin with "/"; accept the slashless spelling
        # clients produce when they join URL segments.
        if entity_id not in engine.meta and not entity_id.startswith("/"):
            prefixed = "/" + entity_id
            if prefixed in engine.meta:
                entity_id = prefixed
        return engine.entity_info(entity_id)

    @app.get("/api/search", response_model=list[SearchResultModel])
    async def search(q: str = Query(...), limit: int = Query(20, gt=0, le=100)):
        return engine.search(q, limit)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(engine: TimelineEngine, bind: str = "127.0.0.1:8000", static_dir=None) -> None:
    import uvicorn

    host, _, port = bind.rpartition(":")
    uvicorn.run(create_app(engine, static_dir), host=host or "127.0.0.1", port=int(port))
