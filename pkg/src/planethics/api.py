"""JSON-over-HTTP API around the session store.

Endpoints (all bodies and responses JSON; errors are
{"code", "message", "detail"}):

    POST   /sessions                     load a model, plan, open a session
    GET    /sessions/{id}                session summary
    GET    /sessions/{id}/plan           current plan with per-step details
    POST   /sessions/{id}/evaluate       judge the current plan {principle}
    POST   /sessions/{id}/suggest        contrastive pipeline {suggestion, principle}
    POST   /sessions/{id}/commit         adopt a history entry {index}
    GET    /sessions/{id}/history        explored suggestions
    DELETE /sessions/{id}                drop the session
"""

from __future__ import annotations

import contextlib
import json

from fastapi import Body, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import (
    BudgetExceeded,
    ConflictingSuggestion,
    ModelSemanticError,
    ModelSyntaxError,
    NoPlanFound,
    PlanEthicsError,
    UnknownAction,
    ValidationFailed,
)
from .ethics import PrincipleId
from .explain import reasons_payload, verdict_payload
from .model import check_goal
from .planner import Objective, SearchBudget
from .service import (
    CommitConflict,
    InvalidImportedPlan,
    SessionStore,
    UnknownSession,
)


def payload_json(payload) -> str:
    """The one JSON serialization used for explanation payloads.

    The CLI's --json output is byte-identical to the /suggest response
    because both go through this function.
    """
    return json.dumps(payload, ensure_ascii=False, allow_nan=False,
                      indent=None, separators=(",", ":"))


class ApiError(Exception):
    def __init__(self, status, code, message, detail=None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)


_ERROR_MAP = [
    (UnknownSession, 404, "unknown_session"),
    (CommitConflict, 409, "conflict"),
    (NoPlanFound, 422, "no_plan_found"),
    (ValidationFailed, 422, "validation_failed"),
    (BudgetExceeded, 422, "budget_exceeded"),
    (ConflictingSuggestion, 422, "conflicting_suggestion"),
    (InvalidImportedPlan, 422, "invalid_plan"),
    (ModelSyntaxError, 400, "syntax_error"),
    (ModelSemanticError, 400, "semantic_error"),
    (UnknownAction, 400, "bad_suggestion"),
]


def _to_api_error(exc: PlanEthicsError) -> ApiError:
    for klass, status, code in _ERROR_MAP:
        if isinstance(exc, klass):
            detail = None
            if isinstance(exc, ModelSyntaxError) and exc.line is not None:
                detail = {"line": exc.line, "col": exc.col}
            if isinstance(exc, ValidationFailed):
                detail = {"stepIndex": exc.step_index}
            return ApiError(status, code, str(exc), detail)
    return ApiError(500, "internal", str(exc))


def _intrinsic_entry(action, display):
    return {
        "name": action.name,
        "cost": action.cost,
        "intrinsic": action.intrinsic.value,
        "display": display.get(action.name),
    }


def session_payload(session) -> dict:
    model = session.current_model
    return {
        "id": session.id,
        "objective": session.objective.value,
        "budget": {"maxDepth": session.budget.max_depth,
                   "maxExpansions": session.budget.max_expansions},
        "createdAt": session.created_at,
        "updatedAt": session.updated_at,
        "plan": {"steps": list(session.current_plan.steps),
                 "cost": session.current_plan.total_cost},
        "provenance": list(model.provenance),
        "actions": [_intrinsic_entry(a, model.display) for a in model.actions],
        "init": sorted(model.init),
        "goal": sorted(model.goal),
        "historyLength": len(session.history),
    }


def plan_payload(session) -> dict:
    model = session.current_model
    plan = session.current_plan
    return {
        "steps": list(plan.steps),
        "cost": plan.total_cost,
        "goalSatisfied": check_goal(model, plan),
        "details": [_intrinsic_entry(model.action(name), model.display)
                    for name in plan.steps],
        "trace": [sorted(state) for state in plan.trace],
    }


def history_payload(session) -> dict:
    entries = []
    for index, entry in enumerate(session.history):
        entries.append({
            "index": index,
            "suggestion": entry.suggestion.id,
            "principle": entry.principle.value,
            "status": entry.status,
            "committed": entry.committed,
            "error": entry.error,
            "explanation": entry.explanation,
        })
    return {"entries": entries}


def _parse_principle(name) -> PrincipleId:
    try:
        return PrincipleId(str(name))
    except ValueError:
        known = ", ".join(p.value for p in PrincipleId)
        raise ApiError(400, "unknown_principle",
                       f"unknown principle {name!r} (known: {known})") from None


def _parse_budget(raw) -> SearchBudget:
    if raw is None:
        return SearchBudget()
    try:
        return SearchBudget(
            max_depth=int(raw.get("maxDepth", SearchBudget().max_depth)),
            max_expansions=int(raw.get("maxExpansions", SearchBudget().max_expansions)),
        )
    except (TypeError, ValueError, AttributeError) as exc:
        raise ApiError(400, "bad_request", f"bad budget: {exc}") from None


def create_app(store: SessionStore | None = None,
               snapshot_path: str | None = None) -> FastAPI:
    store = store if store is not None else SessionStore()

    @contextlib.asynccontextmanager
    async def lifespan(app):
        yield
        if snapshot_path:
            store.snapshot(snapshot_path)

    app = FastAPI(title="planethics", lifespan=lifespan)
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.exception_handler(PlanEthicsError)
    async def handle_domain_error(request: Request, exc: PlanEthicsError):
        return await handle_api_error(request, _to_api_error(exc))

    @app.exception_handler(RequestValidationError)
    async def handle_bad_body(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "bad_request", "message": "malformed request body",
                     "detail": str(exc)},
        )

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        for key in ("domain", "problem"):
            if key not in payload:
                raise ApiError(400, "bad_request", f"missing field: {key}")
        objective_raw = payload.get("objective", Objective.MIN_COST.value)
        try:
            objective = Objective(objective_raw)
        except ValueError:
            raise ApiError(400, "bad_request",
                           f"unknown objective {objective_raw!r}") from None
        session = store.create_session(
            payload["domain"],
            payload["problem"],
            objective=objective,
            budget=_parse_budget(payload.get("budget")),
            imported_plan=payload.get("plan"),
        )
        return session_payload(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_payload(store.get(session_id))

    @app.get("/sessions/{session_id}/plan")
    def get_plan(session_id: str):
        return plan_payload(store.get(session_id))

    @app.post("/sessions/{session_id}/evaluate")
    def evaluate_session(session_id: str, payload: dict = Body(...)):
        principle = _parse_principle(payload.get("principle"))
        verdict, reasons = store.evaluate(session_id, principle)
        return {"verdict": verdict_payload(verdict),
                "reasons": reasons_payload(reasons)}

    @app.post("/sessions/{session_id}/suggest")
    def suggest(session_id: str, payload: dict = Body(...)):
        if "suggestion" not in payload:
            raise ApiError(400, "bad_suggestion", "missing field: suggestion")
        principle = _parse_principle(payload.get("principle"))
        _, entry = store.suggest(session_id, payload["suggestion"], principle)
        return Response(content=payload_json(entry.explanation),
                        media_type="application/json")

    @app.post("/sessions/{session_id}/commit")
    def commit(session_id: str, payload: dict = Body(...)):
        if "index" not in payload:
            raise ApiError(400, "bad_request", "missing field: index")
        try:
            index = int(payload["index"])
        except (TypeError, ValueError):
            raise ApiError(400, "bad_request", "index must be an integer") from None
        session = store.commit(session_id, index)
        return session_payload(session)

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str):
        return history_payload(store.get(session_id))

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        store.delete(session_id)
        return Response(status_code=204)

    return app
