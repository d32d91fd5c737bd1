"""HTTP API over the platform core.

Thin layer: request parsing, error mapping, and response shaping live here;
behavior lives in `promptprog.core`. Every mutation's events are on disk
before the response leaves (the core enforces it). Shadow grading runs as a
background task after the reply is sent, so chat latency excludes grading.
"""

from __future__ import annotations

from fastapi import BackgroundTasks, FastAPI, Header, Query
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import analytics
from .core import Platform
from .errors import PromptProgError

STATUS_BY_CODE = {
    "UNKNOWN_PROBLEM": 404,
    "UNKNOWN_SESSION": 404,
    "LIMIT_REACHED": 409,
    "NO_CODE_AVAILABLE": 409,
    "EMPTY_MESSAGE": 400,
    "PROVIDER_FAILURE": 502,
    "FIXTURE_MISS": 502,
    "STORAGE_FAILURE": 503,
    "CONFIG_ERROR": 500,
    "TOOLCHAIN_MISSING": 500,
    "SANDBOX_SETUP_FAILURE": 500,
}


class CreateSessionBody(BaseModel):
    problem_id: str
    student_id: str | None = None


class PostMessageBody(BaseModel):
    content: str


def create_app(platform: Platform) -> FastAPI:
    app = FastAPI(title="promptprog", version="0.1.0")

    @app.exception_handler(PromptProgError)
    def _handle_domain_error(request, exc: PromptProgError):
        status = STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(
            status_code=status, content={"error": {"code": exc.code, "detail": exc.detail}}
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "problems": len(platform.problems)}

    @app.get("/problems")
    def list_problems():
        return platform.list_problems()

    @app.get("/problems/{problem_id}")
    def problem_detail(problem_id: str):
        return platform.problem_detail(problem_id)

    @app.post("/sessions")
    def create_session(body: CreateSessionBody, x_student_id: str | None = Header(None)):
        student_id = body.student_id or x_student_id or "anonymous"
        session = platform.start_session(student_id, body.problem_id)
        return {"session_id": session.session_id}

    @app.get("/sessions/{session_id}")
    def session_summary(session_id: str):
        return platform.summary(session_id)

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, body: PostMessageBody, background: BackgroundTasks):
        result = platform.post_message(session_id, body.content, defer_shadow=True)
        if result.shadow is not None:
            background.add_task(result.shadow)
        return {
            "assistant_content": result.assistant.content,
            "code_block_count": len(result.assistant.code_blocks),
            "limit": result.limit,
        }

    @app.post("/sessions/{session_id}/run")
    def run_code(
        session_id: str, idempotency_key: str | None = Header(None, alias="Idempotency-Key")
    ):
        report = platform.run_code(session_id, idempotency_key=idempotency_key)
        return {
            "status": report.status,
            "per_function": {k: v.to_payload() for k, v in sorted(report.per_function.items())},
            "all_ok": report.all_ok,
            "diagnostics": report.diagnostics,
            "run_index": report.run_index,
            "duration_ms": report.duration_ms,
        }

    @app.post("/sessions/{session_id}/reset")
    def reset_conversation(
        session_id: str, idempotency_key: str | None = Header(None, alias="Idempotency-Key")
    ):
        fresh = platform.reset_conversation(session_id, idempotency_key=idempotency_key)
        return {"conversation_index": fresh.index}

    def _traces():
        return analytics.reconstruct_traces(platform.events_snapshot())

    def _table_response(table: analytics.MetricTable, format: str) -> Response:
        if format == "csv":
            return PlainTextResponse(table.to_csv(), media_type="text/csv")
        return JSONResponse(table.to_structured())

    @app.get("/analytics/progression/{problem_id}")
    def progression(
        problem_id: str,
        k: int = Query(15, ge=1),
        format: str = Query("dot", pattern="^(dot|structured)$"),
    ):
        platform.problem_detail(problem_id)  # 404 for unknown ids
        graph = analytics.build_progression_graph(_traces(), problem_id)
        data = analytics.export_graph(analytics.filter_top_edges(graph, k), format)
        media = "text/vnd.graphviz" if format == "dot" else "application/json"
        return Response(content=data, media_type=media)

    @app.get("/analytics/lengths")
    def lengths(
        buckets: str | None = Query(None),
        format: str = Query("structured", pattern="^(structured|csv)$"),
    ):
        edges = (
            tuple(int(b) for b in buckets.split(","))
            if buckets
            else platform.config.bucket_edges
        )
        return _table_response(analytics.length_distribution(_traces(), edges), format)

    @app.get("/analytics/message-sizes")
    def message_sizes(format: str = Query("structured", pattern="^(structured|csv)$")):
        return _table_response(analytics.median_size_by_position(_traces()), format)

    @app.get("/analytics/selectivity")
    def selectivity(format: str = Query("structured", pattern="^(structured|csv)$")):
        return _table_response(analytics.execution_selectivity(_traces()), format)

    @app.get("/analytics/descriptive")
    def descriptive(format: str = Query("structured", pattern="^(structured|csv)$")):
        return _table_response(analytics.descriptive_stats(_traces()), format)

    if platform.config.ui_static_path is not None:
        app.mount(
            "/ui",
            StaticFiles(directory=str(platform.config.ui_static_path), html=True),
            name="ui",
        )

    return app


def serve(config) -> None:
    """Blocking entry point used by `promptprog serve`."""
    import uvicorn

    platform = Platform(config)
    app = create_app(platform)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="info")
