"""Session store behind the HTTP API.

A session wraps one loaded model: the immutable base model, the current
model (base plus committed suggestions), the current plan, and a history
of explored suggestions. Exploration (suggest) and adoption (commit) are
separate so a moderator can compare several suggestions against the same
base before iterating.

All operations on one session are serialized by a per-session lock; the
store itself takes a lock only around its session map. Persistence is a
whole-store JSON snapshot.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .compilation import Suggestion, parse_suggestion
from .errors import (
    BudgetExceeded,
    ConflictingSuggestion,
    NoPlanFound,
    PlanEthicsError,
    RestoreFailed,
    ValidationFailed,
)
from .ethics import PrincipleId, evaluate
from .explain import ExplanationProblem, solve_explanation_problem
from .model import PlanningModel, Plan, check_goal, execute_plan
from .parser import parse_model, serialize_model
from .planner import Objective, SearchBudget, find_plan
from .reasons import reasons_for


class UnknownSession(PlanEthicsError):
    def __init__(self, session_id):
        super().__init__(f"unknown session: {session_id}")


class CommitConflict(PlanEthicsError):
    """The history entry cannot be committed (failed, stale, or already committed)."""


class InvalidImportedPlan(PlanEthicsError):
    """An externally supplied plan does not execute or does not reach the goal."""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class HistoryEntry:
    suggestion: Suggestion
    principle: PrincipleId
    status: str  # "ok" | "failed"
    committed: bool = False
    error: dict | None = None
    explanation: dict | None = None  # fixed payload {original, hplan, diff, nl}
    hmodel: PlanningModel | None = None
    hplan_steps: tuple | None = None
    introduced_facts: frozenset = field(default_factory=frozenset)


class Session:
    def __init__(self, session_id, base_model, plan, objective, budget,
                 created_at=None, updated_at=None):
        self.id = session_id
        self.base_model: PlanningModel = base_model
        self.current_model: PlanningModel = base_model
        self.current_plan: Plan = plan
        self.objective: Objective = objective
        self.budget: SearchBudget = budget
        self.history: list[HistoryEntry] = []
        self.created_at = created_at or _now()
        self.updated_at = updated_at or self.created_at
        self.lock = threading.RLock()

    def touch(self):
        self.updated_at = _now()

    def to_state(self) -> dict:
        def model_state(model):
            domain, problem = serialize_model(model)
            return {"domain": domain.text, "problem": problem.text}

        entries = []
        for entry in self.history:
            entries.append({
                "suggestion": entry.suggestion.id,
                "principle": entry.principle.value,
                "status": entry.status,
                "committed": entry.committed,
                "error": entry.error,
                "explanation": entry.explanation,
                "hmodel": model_state(entry.hmodel) if entry.hmodel else None,
                "hplanSteps": list(entry.hplan_steps) if entry.hplan_steps is not None else None,
                "introducedFacts": sorted(entry.introduced_facts),
            })
        return {
            "id": self.id,
            "objective": self.objective.value,
            "budget": {"maxDepth": self.budget.max_depth,
                       "maxExpansions": self.budget.max_expansions},
            "createdAt": self.created_at,
            "updatedAt": self.updated_at,
            "base": model_state(self.base_model),
            "current": model_state(self.current_model),
            "currentPlanSteps": list(self.current_plan.steps),
            "history": entries,
        }

    @classmethod
    def from_state(cls, state: dict) -> "Session":
        base = parse_model(state["base"]["domain"], state["base"]["problem"])
        current = parse_model(state["current"]["domain"], state["current"]["problem"])
        budget = SearchBudget(
            max_depth=state["budget"]["maxDepth"],
            max_expansions=state["budget"]["maxExpansions"],
        )
        session = cls(
            session_id=state["id"],
            base_model=base,
            plan=execute_plan(current, state["currentPlanSteps"]),
            objective=Objective(state["objective"]),
            budget=budget,
            created_at=state["createdAt"],
            updated_at=state["updatedAt"],
        )
        session.current_model = current
        for raw in state["history"]:
            hmodel = (parse_model(raw["hmodel"]["domain"], raw["hmodel"]["problem"])
                      if raw["hmodel"] else None)
            session.history.append(HistoryEntry(
                suggestion=parse_suggestion(raw["suggestion"]),
                principle=PrincipleId(raw["principle"]),
                status=raw["status"],
                committed=raw["committed"],
                error=raw["error"],
                explanation=raw["explanation"],
                hmodel=hmodel,
                hplan_steps=tuple(raw["hplanSteps"]) if raw["hplanSteps"] is not None else None,
                introduced_facts=frozenset(raw["introducedFacts"]),
            ))
        return session


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.RLock()

    def __len__(self):
        with self._lock:
            return len(self._sessions)

    def ids(self):
        with self._lock:
            return sorted(self._sessions)

    def get(self, session_id) -> Session:
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSession(session_id) from None

    def create_session(self, domain_text, problem_text,
                       objective: Objective = Objective.MIN_COST,
                       budget: SearchBudget = SearchBudget(),
                       imported_plan=None) -> Session:
        """Parse the documents and plan (or validate an imported step list)."""
        model = parse_model(domain_text, problem_text)
        if imported_plan is not None:
            try:
                plan = execute_plan(model, imported_plan)
            except PlanEthicsError as exc:
                raise InvalidImportedPlan(str(exc)) from exc
            if not check_goal(model, plan):
                raise InvalidImportedPlan("imported plan does not satisfy the goal")
        else:
            plan = find_plan(model, objective, budget)
        session = Session(
            session_id=secrets.token_hex(8),
            base_model=model,
            plan=plan,
            objective=objective,
            budget=budget,
        )
        with self._lock:
            self._sessions[session.id] = session
        return session

    def delete(self, session_id):
        with self._lock:
            if session_id not in self._sessions:
                raise UnknownSession(session_id)
            del self._sessions[session_id]

    def evaluate(self, session_id, principle: PrincipleId):
        """Verdict and reasons for the session's current plan."""
        session = self.get(session_id)
        with session.lock:
            verdict = evaluate(principle, session.current_model, session.current_plan,
                               session.budget)
            return verdict, reasons_for(verdict)

    def suggest(self, session_id, suggestion_text, principle: PrincipleId):
        """Run the contrastive pipeline; record the attempt in history.

        Attempts that compile but cannot be satisfied (NoPlanFound,
        ValidationFailed, BudgetExceeded, ConflictingSuggestion) are recorded
        as failed entries before the error propagates, so the moderator's
        history shows what was tried.
        """
        session = self.get(session_id)
        with session.lock:
            suggestion = parse_suggestion(suggestion_text)
            problem = ExplanationProblem(
                model=session.current_model,
                plan=session.current_plan,
                suggestion=suggestion,
                principle=principle,
            )
            try:
                explanation = solve_explanation_problem(
                    problem, session.budget, session.objective,
                    validation_model=session.base_model,
                )
            except (NoPlanFound, ValidationFailed, BudgetExceeded,
                    ConflictingSuggestion) as exc:
                session.history.append(HistoryEntry(
                    suggestion=suggestion,
                    principle=principle,
                    status="failed",
                    error={"code": type(exc).__name__, "message": str(exc)},
                ))
                session.touch()
                raise
            entry = HistoryEntry(
                suggestion=suggestion,
                principle=principle,
                status="ok",
                explanation=explanation.payload(),
                hmodel=explanation.hmodel_result.hmodel,
                hplan_steps=tuple(explanation.hplan.steps),
                introduced_facts=explanation.hmodel_result.introduced_facts,
            )
            session.history.append(entry)
            session.touch()
            return len(session.history) - 1, entry

    def commit(self, session_id, index):
        """Adopt a history entry: its HModel and HPlan become current."""
        session = self.get(session_id)
        with session.lock:
            if not 0 <= index < len(session.history):
                raise UnknownSession(f"{session_id}/history/{index}")
            entry = session.history[index]
            if entry.status != "ok":
                raise CommitConflict(f"history entry {index} failed and cannot be committed")
            if entry.committed:
                raise CommitConflict(f"history entry {index} is already committed")
            expected = session.current_model.provenance + (entry.suggestion.id,)
            if entry.hmodel.provenance != expected:
                raise CommitConflict(
                    f"history entry {index} is stale: the session has moved on"
                )
            session.current_model = entry.hmodel
            session.current_plan = execute_plan(entry.hmodel, entry.hplan_steps)
            entry.committed = True
            session.touch()
            return session

    def snapshot(self, path):
        """Serialize every session to one JSON file (atomic replace)."""
        with self._lock:
            sessions = [self._sessions[sid] for sid in sorted(self._sessions)]
            states = []
            for session in sessions:
                with session.lock:
                    states.append(session.to_state())
        data = {"version": 1, "sessions": states}
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
        os.replace(tmp, path)

    def restore(self, path):
        """Replace the store's sessions with the snapshot's.

        Any failure (missing/empty/corrupt file, unparseable model) raises
        RestoreFailed and leaves the live store untouched.
        """
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            if not isinstance(data, dict) or data.get("version") != 1:
                raise ValueError("unrecognized snapshot layout")
            sessions = [Session.from_state(s) for s in data["sessions"]]
        except RestoreFailed:
            raise
        except Exception as exc:
            raise RestoreFailed(f"cannot restore from {path}: {exc}") from exc
        with self._lock:
            self._sessions = {s.id: s for s in sessions}
