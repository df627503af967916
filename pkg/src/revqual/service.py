"""HTTP service exposing the analysis engine.

Three analysis endpoints plus a health probe. Request bodies are parsed
manually so malformed JSON (400) is distinguished from invariant
violations (422, with machine-readable codes). Logs are structured JSON
on stderr and never contain request body content - only IDs, sizes,
timings, and error codes.
"""

import json
import logging
import sys
import time
import uuid

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .engine import ENGINE_VERSION, AnalysisEngine, ReviewInput
from .errors import (
    BackendError,
    InvalidAuthorId,
    InvalidInput,
    MalformedResponse,
    ModelNotLoaded,
    NotFound,
    RateLimited,
)
from .openalex import ReviewerProfile, normalize_author_id

_LOG = logging.getLogger("revqual.service")


def _ensure_log_handler():
    if not _LOG.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(message)s"))
        _LOG.addHandler(handler)
        _LOG.setLevel(logging.INFO)
        _LOG.propagate = False


def _error_response(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def create_app(engine: AnalysisEngine | None = None, max_batch: int = 500) -> FastAPI:
    """Build the service around an engine (a bare one if none is given)."""
    _ensure_log_handler()
    app = FastAPI(title="review-quality service", version=ENGINE_VERSION, docs_url=None, redoc_url=None)
    app.state.engine = engine or AnalysisEngine()
    app.state.max_batch = max_batch

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        request_id = uuid.uuid4().hex[:12]
        started = time.perf_counter()
        try:
            response = await call_next(request)
        except Exception:
            _LOG.info(
                json.dumps(
                    {
                        "request_id": request_id,
                        "method": request.method,
                        "path": request.url.path,
                        "status": 500,
                        "duration_ms": round((time.perf_counter() - started) * 1000, 3),
                    },
                    sort_keys=True,
                )
            )
            return _error_response(500, "internal_error", "unhandled server error")
        _LOG.info(
            json.dumps(
                {
                    "request_id": request_id,
                    "method": request.method,
                    "path": request.url.path,
                    "status": response.status_code,
                    "request_bytes": int(request.headers.get("content-length") or 0),
                    "duration_ms": round((time.perf_counter() - started) * 1000, 3),
                },
                sort_keys=True,
            )
        )
        response.headers["X-Request-ID"] = request_id
        return response

    async def _read_json(request: Request):
        body = await request.body()
        try:
            return json.loads(body)
        except ValueError as exc:
            raise ValueError(f"request body is not valid JSON: {exc}")

    def _analyze_one(obj) -> tuple[int, dict]:
        """(status, payload) for one review object; isolation-safe."""
        engine: AnalysisEngine = app.state.engine
        try:
            review = ReviewInput.from_dict(obj)
            report = engine.analyze(review)
        except InvalidInput as exc:
            return 422, {"error": exc.code, "detail": exc.message}
        except ModelNotLoaded as exc:
            return 503, {"error": "model_not_loaded", "detail": str(exc)}
        return 200, report.to_dict()

    @app.post("/v1/analyze")
    async def analyze(request: Request):
        try:
            obj = await _read_json(request)
        except ValueError as exc:
            return _error_response(400, "malformed_json", str(exc))
        status, payload = _analyze_one(obj)
        return JSONResponse(status_code=status, content=payload)

    @app.post("/v1/analyze/batch")
    async def analyze_batch(request: Request):
        try:
            items = await _read_json(request)
        except ValueError as exc:
            return _error_response(400, "malformed_json", str(exc))
        if not isinstance(items, list):
            return _error_response(400, "not_an_array", "batch body must be a JSON array")
        if not items:
            return _error_response(400, "batch_empty", "batch must contain at least one item")
        if len(items) > app.state.max_batch:
            return _error_response(
                400, "batch_too_large", f"batch has {len(items)} items; limit is {app.state.max_batch}"
            )
        results = []
        for item in items:
            status, payload = _analyze_one(item)
            if status != 200:
                payload = {**payload, "status": status}
            results.append(payload)
        return JSONResponse(status_code=200, content=results)

    @app.get("/v1/reviewer/{openalex_id}")
    async def reviewer(openalex_id: str, submission_text: str = ""):
        engine: AnalysisEngine = app.state.engine
        try:
            author_id = normalize_author_id(openalex_id)
        except InvalidAuthorId as exc:
            return _error_response(422, "bad_reviewer_id", str(exc))
        if engine.openalex_client is None:
            return _error_response(
                503, "profile_not_configured", "no scholarly-metadata client is configured"
            )
        try:
            profile: ReviewerProfile = engine.openalex_client.get_profile(
                author_id, submission_text, backend=engine.embedding_backend
            )
        except NotFound as exc:
            return _error_response(404, "author_not_found", str(exc))
        except RateLimited as exc:
            return _error_response(502, "rate_limited", str(exc))
        except (BackendError, MalformedResponse) as exc:
            return _error_response(502, "upstream_failure", str(exc))
        payload = profile.to_dict()
        if not submission_text.strip():
            payload.pop("topical_alignment")
        return JSONResponse(status_code=200, content=payload)

    @app.get("/v1/health")
    async def health():
        engine: AnalysisEngine = app.state.engine
        return {
            "status": "ok",
            "engine_version": ENGINE_VERSION,
            "model_loaded": engine.model is not None,
        }

    @app.exception_handler(Exception)
    async def unhandled(request: Request, exc: Exception):  # pragma: no cover
        return _error_response(500, "internal_error", "unhandled server error")

    return app
