"""HTTP API around the annotation pipeline.

Endpoints:
    POST /api/annotate  {text, window?, trigger_set?} -> annotated document
    POST /api/match     {conllu, pattern} -> pattern matches per sentence
    GET  /api/patterns  shipped dependency patterns
    GET  /api/triggers  trigger set inventory
    GET  /             web UI when a static directory is configured

Errors are JSON objects {error, detail, ...}; pattern syntax errors carry the
character offset, CoNLL-U errors the line number. The server holds only
immutable resources, so every request is independent.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .deppat import match_pattern, parse_conllu, parse_pattern, unparse_pattern
from .errors import ConlluFormatError, NegdetectError, PatternSyntaxError
from .negex import MAX_WINDOW, MIN_WINDOW, NegexConfig
from .pipeline import Pipeline, Resources, _UNSET
from .textmodel import document_to_json


class AnnotateRequest(BaseModel):
    text: str
    # Absent: server default. "inf": unlimited. Integer: token window.
    window: int | str | None = None
    trigger_set: str | None = None


class MatchRequest(BaseModel):
    conllu: str
    pattern: str


_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>negdetect</title></head>
<body><h1>negdetect API</h1>
<p>No web UI build is configured. Endpoints: POST /api/annotate,
POST /api/match, GET /api/patterns, GET /api/triggers.</p></body></html>
"""


def _parse_request_window(value: int | str | None):
    if value is None:
        return _UNSET
    if isinstance(value, str):
        stripped = value.strip().lower()
        if stripped in ("inf", "unlimited"):
            return None
        try:
            value = int(stripped)
        except ValueError:
            raise ValueError(f"window must be an integer or 'inf', got {value!r}") from None
    if not (MIN_WINDOW <= value <= MAX_WINDOW):
        raise ValueError(f"window must be in [{MIN_WINDOW}, {MAX_WINDOW}] or 'inf'")
    return value


def create_app(
    resources: Resources,
    config: NegexConfig = NegexConfig(),
    static_dir: Path | None = None,
) -> FastAPI:
    app = FastAPI(title="negdetect", docs_url=None, redoc_url=None)
    pipeline = Pipeline(resources, config)

    @app.exception_handler(PatternSyntaxError)
    async def pattern_error(_: Request, exc: PatternSyntaxError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"error": "pattern_syntax", "detail": str(exc), "offset": exc.offset},
        )

    @app.exception_handler(ConlluFormatError)
    async def conllu_error(_: Request, exc: ConlluFormatError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"error": "conllu_format", "detail": str(exc), "line": exc.line},
        )

    @app.exception_handler(NegdetectError)
    async def toolkit_error(_: Request, exc: NegdetectError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": "toolkit", "detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error(_: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"error": "invalid_request", "detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def validation_error(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"error": "validation", "detail": str(exc)})

    @app.post("/api/annotate")
    async def annotate(request: AnnotateRequest) -> JSONResponse:
        window = _parse_request_window(request.window)
        document = pipeline.annotate(request.text, trigger_set=request.trigger_set, window=window)
        return JSONResponse(content=document_to_json(document))

    @app.post("/api/match")
    async def match(request: MatchRequest) -> JSONResponse:
        graphs = parse_conllu(request.conllu)
        if not graphs:
            raise ConlluFormatError("no sentences in CoNLL-U input", line=1)
        pattern = parse_pattern(request.pattern)
        matches = []
        for index, graph in enumerate(graphs):
            for m in match_pattern(pattern, graph):
                matches.append(
                    {"graph": index, "root": m.root, "bindings": m.binding_map}
                )
        return JSONResponse(
            content={
                "pattern": unparse_pattern(pattern),
                "graphs": len(graphs),
                "matches": matches,
            }
        )

    @app.get("/api/patterns")
    async def patterns() -> JSONResponse:
        return JSONResponse(
            content={
                "patterns": [
                    {
                        "text": unparse_pattern(p),
                        "kind": p.kind.value if p.kind is not None else None,
                    }
                    for p in resources.patterns
                ]
            }
        )

    @app.get("/api/triggers")
    async def triggers() -> JSONResponse:
        sets = []
        for name, trigger_set in resources.trigger_sets.items():
            counts = {t.value: n for t, n in trigger_set.counts_by_type().items()}
            sets.append(
                {
                    "name": name,
                    "default": name == resources.default_trigger_set,
                    "counts": counts,
                    "total": len(trigger_set.triggers),
                    "triggers": [
                        {"pattern": t.pattern, "type": t.type.value}
                        for t in trigger_set.triggers
                    ],
                }
            )
        return JSONResponse(content={"trigger_sets": sets})

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        async def index() -> str:
            return _FALLBACK_PAGE

    return app
