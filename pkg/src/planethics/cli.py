"""Batch command-line front end; also launches the HTTP service.

Exit codes: 0 success, 1 usage or input error, 2 no plan / validation
failure, 3 internal error.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .api import create_app, payload_json
from .compilation import parse_suggestion
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
from .ethics import PrincipleId, evaluate
from .explain import (
    ExplanationProblem,
    reasons_payload,
    solve_explanation_problem,
    verdict_payload,
)
from .parser import SourceDocument, parse_model
from .planner import Objective, SearchBudget, find_plan
from .reasons import reasons_for
from .service import SessionStore


def _load_model(domain_path, problem_path):
    with open(domain_path, encoding="utf-8") as fh:
        domain = SourceDocument(fh.read(), origin=domain_path)
    with open(problem_path, encoding="utf-8") as fh:
        problem = SourceDocument(fh.read(), origin=problem_path)
    return parse_model(domain, problem)


def _budget(max_depth, max_expansions) -> SearchBudget:
    return SearchBudget(max_depth=max_depth, max_expansions=max_expansions)


_PRINCIPLES = [p.value for p in PrincipleId]
_OBJECTIVES = [o.value for o in Objective]


def _model_options(fn):
    fn = click.option("--domain", "-d", "domain_path", required=True,
                      type=click.Path(exists=True, dir_okay=False),
                      help="Domain file.")(fn)
    fn = click.option("--problem", "-p", "problem_path", required=True,
                      type=click.Path(exists=True, dir_okay=False),
                      help="Problem file.")(fn)
    fn = click.option("--objective", type=click.Choice(_OBJECTIVES),
                      default=Objective.MIN_COST.value, show_default=True,
                      help="Planning objective.")(fn)
    fn = click.option("--max-depth", type=int, default=SearchBudget().max_depth,
                      show_default=True, help="Plan length bound.")(fn)
    fn = click.option("--max-expansions", type=int,
                      default=SearchBudget().max_expansions, show_default=True,
                      help="Search node budget.")(fn)
    fn = click.option("--json", "as_json", is_flag=True, help="Emit JSON.")(fn)
    return fn


@click.group()
def cli():
    """Judge plans under ethical principles and explain what-if suggestions."""


def _plan_line(steps, cost) -> str:
    return f"{'; '.join(steps) if steps else '(empty)'} (cost {cost})"


@cli.command("plan")
@_model_options
def plan_cmd(domain_path, problem_path, objective, max_depth, max_expansions, as_json):
    """Print a cost-optimal plan for the model."""
    model = _load_model(domain_path, problem_path)
    plan = find_plan(model, Objective(objective), _budget(max_depth, max_expansions))
    if as_json:
        click.echo(payload_json({"steps": list(plan.steps), "cost": plan.total_cost}))
    else:
        click.echo(_plan_line(plan.steps, plan.total_cost))


@cli.command("evaluate")
@_model_options
@click.option("--principle", required=True, type=click.Choice(_PRINCIPLES),
              help="Ethical principle to judge under.")
def evaluate_cmd(domain_path, problem_path, objective, max_depth, max_expansions,
                 as_json, principle):
    """Plan, then judge the plan's moral permissibility."""
    model = _load_model(domain_path, problem_path)
    budget = _budget(max_depth, max_expansions)
    plan = find_plan(model, Objective(objective), budget)
    verdict = evaluate(PrincipleId(principle), model, plan, budget)
    reasons = reasons_for(verdict)
    if as_json:
        click.echo(payload_json({
            "plan": {"steps": list(plan.steps), "cost": plan.total_cost},
            "verdict": verdict_payload(verdict),
            "reasons": reasons_payload(reasons),
        }))
        return
    word = "permissible" if verdict.permissible else "impermissible"
    click.echo(f"plan: {_plan_line(plan.steps, plan.total_cost)}")
    click.echo(f"{word} under {principle}")
    click.echo(f"formula: {verdict.formula.formula}")
    if verdict.bound_note:
        click.echo(f"bound: {verdict.bound_note}")
    for kind, entries in (("sufficient", reasons.sufficient),
                          ("necessary", reasons.necessary)):
        for reason in entries:
            flag = " [sufficient-and-necessary]" if reason.sufficient_and_necessary else ""
            click.echo(f"{kind}: {reason.text()}{flag}")


@cli.command("explain")
@_model_options
@click.option("--suggest", "suggestion_text", required=True,
              help='Suggestion, e.g. "replace lie_frank with beg_frank".')
@click.option("--principle", required=True, type=click.Choice(_PRINCIPLES),
              help="Ethical principle to judge under.")
def explain_cmd(domain_path, problem_path, objective, max_depth, max_expansions,
                as_json, suggestion_text, principle):
    """Run the full contrastive pipeline for one suggestion."""
    model = _load_model(domain_path, problem_path)
    budget = _budget(max_depth, max_expansions)
    obj = Objective(objective)
    plan = find_plan(model, obj, budget)
    problem = ExplanationProblem(
        model=model,
        plan=plan,
        suggestion=parse_suggestion(suggestion_text),
        principle=PrincipleId(principle),
    )
    explanation = solve_explanation_problem(problem, budget, obj)
    if as_json:
        click.echo(payload_json(explanation.payload()))
    else:
        click.echo(explanation.nl)


@cli.command("serve")
@click.option("--host", default=None, help="Listen address.")
@click.option("--port", default=None, type=int, help="Listen port.")
@click.option("--snapshot", "snapshot_path", default=None,
              type=click.Path(dir_okay=False),
              help="Session snapshot file (restored on start, written on shutdown).")
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON config file with host/port/snapshot.")
def serve_cmd(host, port, snapshot_path, config_path):
    """Start the HTTP service.

    Precedence for host/port/snapshot: flags, then PLANETHICS_HOST /
    PLANETHICS_PORT / PLANETHICS_SNAPSHOT environment variables, then the
    config file, then defaults (127.0.0.1:8085, no snapshot).
    """
    import uvicorn

    config = {}
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            config = json.load(fh)

    def resolve(flag, env_name, config_key, default):
        if flag is not None:
            return flag
        if os.environ.get(env_name):
            return os.environ[env_name]
        return config.get(config_key, default)

    host = resolve(host, "PLANETHICS_HOST", "host", "127.0.0.1")
    port = int(resolve(port, "PLANETHICS_PORT", "port", 8085))
    snapshot_path = resolve(snapshot_path, "PLANETHICS_SNAPSHOT", "snapshot", None)

    store = SessionStore()
    if snapshot_path and os.path.exists(snapshot_path):
        store.restore(snapshot_path)  # RestoreFailed aborts startup on purpose
        click.echo(f"restored {len(store)} session(s) from {snapshot_path}", err=True)
    app = create_app(store, snapshot_path=snapshot_path)
    uvicorn.run(app, host=host, port=port, log_level="info")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except (ModelSyntaxError, ModelSemanticError, UnknownAction) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except (NoPlanFound, ValidationFailed, BudgetExceeded, ConflictingSuggestion) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except PlanEthicsError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        click.echo(f"internal error: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
