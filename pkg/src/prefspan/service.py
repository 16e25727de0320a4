"""HTTP API over the session machinery.

All bodies are JSON. Error responses share one shape:
``{"code": ..., "message": ..., "detail": ...?}`` where ``code`` is a
stable machine-readable tag.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .errors import (
    ConflictError,
    InputError,
    NotFoundError,
    OracleScaleExceeded,
    PreconditionError,
)
from .session import Action, AnalysisReport, SessionManager, SessionState, Store, analyze

__all__ = ["create_app"]


def _error(status: int, code: str, message: str, detail: Any = None) -> JSONResponse:
    body: dict[str, Any] = {"code": code, "message": message}
    if detail is not None:
        body["detail"] = detail
    return JSONResponse(status_code=status, content=body)


def state_to_json(state: SessionState) -> dict[str, Any]:
    return {
        "sessionId": state.session_id,
        "instanceId": state.instance_id,
        "mode": state.mode,
        "committed": sorted(state.committed),
        "excluded": sorted(state.excluded),
        "consistentNow": sorted(state.consistent_now),
        "status": state.status,
        "warnings": list(state.warnings),
        "history": [
            {"committed": sorted(c), "excluded": sorted(x)} for c, x in state.history
        ],
    }


def report_to_json(report: AnalysisReport) -> dict[str, Any]:
    return {
        "connected": report.connected,
        "pAcyclic": report.p_acyclic,
        "consistentEdges": (
            "no" if report.consistent_edges is None else sorted(report.consistent_edges)
        ),
        "maximalTrees": (
            None
            if report.maximal_trees is None
            else [sorted(t) for t in report.maximal_trees]
        ),
    }


def create_app(store_dir: str | Path) -> FastAPI:
    store = Store(store_dir)
    manager = SessionManager(store)
    app = FastAPI(title="prefspan service", docs_url=None, redoc_url=None)

    @app.exception_handler(InputError)
    async def _input_error(request: Request, exc: InputError) -> JSONResponse:
        return _error(422, exc.code or "invalid_instance", str(exc))

    @app.exception_handler(PreconditionError)
    async def _precondition_error(
        request: Request, exc: PreconditionError
    ) -> JSONResponse:
        return _error(422, exc.code or "precondition_failed", str(exc))

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError) -> JSONResponse:
        return _error(404, "not_found", str(exc))

    @app.exception_handler(ConflictError)
    async def _conflict(request: Request, exc: ConflictError) -> JSONResponse:
        return _error(409, "conflict", str(exc))

    @app.exception_handler(OracleScaleExceeded)
    async def _cap(request: Request, exc: OracleScaleExceeded) -> JSONResponse:
        return _error(422, "cap_exceeded", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _bad_body(request: Request, exc: RequestValidationError) -> JSONResponse:
        return _error(422, "bad_document", "request body is not a JSON object")

    @app.get("/healthz")
    async def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/instances", status_code=201)
    async def post_instance(document: dict = Body(...)) -> dict[str, str]:
        return {"instanceId": store.put_instance(document)}

    @app.get("/instances/{iid}")
    async def get_instance(iid: str) -> dict:
        return store.get_instance(iid).document

    @app.get("/instances/{iid}/analysis")
    async def get_analysis(iid: str) -> dict:
        stored = store.get_instance(iid)
        return report_to_json(analyze(stored.parsed.instance()))

    @app.post("/sessions", status_code=201)
    async def post_session(body: dict = Body(...)) -> dict:
        instance_id = body.get("instanceId")
        if not isinstance(instance_id, str):
            raise InputError("body needs a string 'instanceId'", code="bad_document")
        mode = body.get("mode")
        if mode is not None and not isinstance(mode, str):
            raise InputError("'mode' must be a string", code="bad_mode")
        return state_to_json(manager.create(instance_id, mode))

    @app.get("/sessions/{sid}")
    async def get_session(sid: str) -> dict:
        return state_to_json(manager.get(sid))

    @app.post("/sessions/{sid}/actions")
    async def post_action(sid: str, body: dict = Body(...)) -> dict:
        kind = body.get("kind")
        if not isinstance(kind, str):
            raise InputError("action needs a string 'kind'", code="bad_action")
        edge = body.get("edge")
        if edge is not None and not isinstance(edge, str):
            raise InputError("'edge' must be a string", code="bad_action")
        return state_to_json(manager.act(sid, Action(kind=kind, edge=edge)))

    return app
