"""Contrastive explanations: verdicts and reasons for plan vs HPlan.

solve_explanation_problem runs the whole loop for one suggestion: compile
the HModel, plan on it, validate the HPlan against the original model,
judge both plans under the chosen principle, extract reasons, diff the
plans, and render one deterministic natural-language sentence.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .compilation import HModelResult, Suggestion, compile_suggestion, strip_auxiliaries
from .errors import NoPlanFound
from .ethics import AtomKind, PrincipleId, Verdict, evaluate
from .model import Plan, PlanningModel, execute_plan
from .planner import Objective, SearchBudget, find_plan
from .reasons import Reason, ReasonSet, literal_text, reasons_for, sorted_literals


@dataclass(frozen=True)
class ExplanationProblem:
    """One unit of moderator work: model, its plan, a suggestion, a principle."""

    model: PlanningModel
    plan: Plan
    suggestion: Suggestion
    principle: PrincipleId


@dataclass(frozen=True)
class ContrastiveExplanation:
    original_plan: Plan
    original_verdict: Verdict
    h_verdict: Verdict
    original_reasons: ReasonSet
    h_reasons: ReasonSet
    removed_steps: tuple
    added_steps: tuple
    common_steps: tuple
    hmodel_result: HModelResult
    hplan: Plan
    nl: str

    def payload(self) -> dict:
        """The fixed JSON shape served by the API and printed by the CLI."""
        return {
            "original": _side_payload(self.original_verdict, self.original_reasons,
                                      list(self.original_plan.steps)),
            "hplan": _side_payload(self.h_verdict, self.h_reasons, list(self.hplan.steps)),
            "diff": {
                "removed": list(self.removed_steps),
                "added": list(self.added_steps),
                "common": list(self.common_steps),
            },
            "nl": self.nl,
        }


def plan_diff(original, hplan):
    """Multiset difference of two step lists, first-occurrence order preserved."""
    original = list(original)
    hplan = list(hplan)
    common_counts = Counter(original) & Counter(hplan)

    def take(source, counts):
        budgeted = Counter(counts)
        out = []
        for step in source:
            if budgeted[step] > 0:
                budgeted[step] -= 1
                out.append(step)
        return out

    common = take(original, common_counts)
    removed = take(original, Counter(original) - common_counts)
    added = take(hplan, Counter(hplan) - common_counts)
    return removed, added, common


def verdict_payload(verdict: Verdict) -> dict:
    pf = verdict.formula
    return {
        "permissible": verdict.permissible,
        "principle": verdict.principle.value,
        "formula": str(pf.formula),
        "assignment": {str(atom): value
                       for atom, value in sorted(pf.assignment.items(),
                                                 key=lambda kv: str(kv[0]))},
        "boundNote": verdict.bound_note,
    }


def reasons_payload(reason_set: ReasonSet) -> dict:
    def entry(reason: Reason) -> dict:
        return {
            "text": reason.text(),
            "literals": [literal_text(l) for l in sorted_literals(reason.literals)],
            "sufficientAndNecessary": reason.sufficient_and_necessary,
        }

    return {
        "sufficient": [entry(r) for r in reason_set.sufficient],
        "necessary": [entry(r) for r in reason_set.necessary],
    }


def _side_payload(verdict, reason_set, steps):
    return {
        "steps": list(steps),
        "verdict": verdict_payload(verdict),
        "reasons": reasons_payload(reason_set),
    }


_VERB_PHRASES = {
    (AtomKind.BAD_ACTION, True): "{0} is bad",
    (AtomKind.BAD_ACTION, False): "{0} is not bad",
    (AtomKind.CAUSES_HARM, True): "{0} causes {1}",
    (AtomKind.CAUSES_HARM, False): "{0} does not cause {1}",
    (AtomKind.MEANS_TO_GOAL, True): "{0} is a means to the goal",
    (AtomKind.MEANS_TO_GOAL, False): "{0} is not a means to the goal",
    (AtomKind.GOAL_FACT, True): "the goal includes the harm {0}",
    (AtomKind.GOAL_FACT, False): "the goal does not include the harm {0}",
    (AtomKind.UTILITY_DOMINATED, True): "another plan achieves higher utility",
    (AtomKind.UTILITY_DOMINATED, False): "no alternative plan achieves higher utility",
    (AtomKind.PROPORTIONALITY_HOLDS, True): "the good outweighs the harm",
    (AtomKind.PROPORTIONALITY_HOLDS, False): "the good does not outweigh the harm",
}


def _render_literal(literal, display) -> str:
    atom, polarity = literal
    template = _VERB_PHRASES[(atom.kind, polarity)]
    if atom.kind in (AtomKind.UTILITY_DOMINATED, AtomKind.PROPORTIONALITY_HOLDS):
        return template
    phrases = []
    for name in atom.args:
        if name not in display:
            return literal_text(literal)  # no phrase for this name: raw atom syntax
        phrases.append(display[name])
    return template.format(*phrases)


def _render_reason(reason: Reason, display) -> str:
    if not reason.literals:
        return "the principle imposes no conditions"
    return " and ".join(
        _render_literal(l, display) for l in sorted_literals(reason.literals)
    )


def _pick_reason(reason_set: ReasonSet, diff_actions) -> Reason | None:
    """Top-ranked reason, preferring ones that talk only about diff actions."""
    ranked = reason_set.ranked()
    if not ranked:
        return None
    if diff_actions:
        focused = [
            r for r in ranked
            if r.literals and r.atom_names() and r.atom_names() <= diff_actions
        ]
        if focused:
            return focused[0]
    return ranked[0]


def render_nl(original_verdict, h_verdict, original_reasons, h_reasons,
              removed, added, display) -> str:
    """One deterministic contrastive sentence comparing the two verdicts."""
    diff_actions = set(removed) | set(added)
    word1 = "permissible" if original_verdict.permissible else "impermissible"
    word2 = "permissible" if h_verdict.permissible else "impermissible"

    reason1 = _pick_reason(original_reasons, diff_actions)
    reason2 = _pick_reason(h_reasons, diff_actions)
    text1 = _render_reason(reason1, display) if reason1 else "no reason was extracted"
    text2 = _render_reason(reason2, display) if reason2 else "no reason was extracted"

    if word1 == word2:
        if text1 == text2:
            return f"Both plans are {word1} because {text1}"
        return (
            f"Both plans are {word1}: the original plan because {text1}, "
            f"and the HPlan because {text2}"
        )
    return (
        f"The original plan is {word1} because {text1}, "
        f"whereas the HPlan is {word2} because {text2}"
    )


def explain_against_hmodel(problem: ExplanationProblem, hmodel_result: HModelResult,
                           budget: SearchBudget = SearchBudget(),
                           objective: Objective = Objective.MIN_COST,
                           validation_model: PlanningModel | None = None,
                           ) -> ContrastiveExplanation:
    """Finish the pipeline for an already-compiled HModel.

    Validation against the original model happens before any ethical
    evaluation; an HPlan that is inapplicable there never produces an
    explanation.
    """
    original = validation_model if validation_model is not None else problem.model
    try:
        raw_hplan = find_plan(hmodel_result.hmodel, objective, budget)
    except NoPlanFound:
        raise NoPlanFound(
            "no plan satisfies the suggestion",
            provenance=hmodel_result.hmodel.provenance,
        ) from None
    steps = strip_auxiliaries(original, raw_hplan)

    original_verdict = evaluate(problem.principle, problem.model, problem.plan, budget)
    h_plan_on_model = execute_plan(problem.model, steps)
    h_verdict = evaluate(problem.principle, problem.model, h_plan_on_model, budget)

    original_reasons = reasons_for(original_verdict)
    h_reasons = reasons_for(h_verdict)
    removed, added, common = plan_diff(problem.plan.steps, steps)
    nl = render_nl(original_verdict, h_verdict, original_reasons, h_reasons,
                   removed, added, problem.model.display)

    return ContrastiveExplanation(
        original_plan=problem.plan,
        original_verdict=original_verdict,
        h_verdict=h_verdict,
        original_reasons=original_reasons,
        h_reasons=h_reasons,
        removed_steps=tuple(removed),
        added_steps=tuple(added),
        common_steps=tuple(common),
        hmodel_result=hmodel_result,
        hplan=h_plan_on_model,
        nl=nl,
    )


def solve_explanation_problem(problem: ExplanationProblem,
                              budget: SearchBudget = SearchBudget(),
                              objective: Objective = Objective.MIN_COST,
                              validation_model: PlanningModel | None = None,
                              ) -> ContrastiveExplanation:
    """Full pipeline: compile, plan, validate, judge both plans, diff, render."""
    hmodel_result = compile_suggestion(problem.model, problem.suggestion)
    return explain_against_hmodel(problem, hmodel_result, budget, objective,
                                  validation_model)
