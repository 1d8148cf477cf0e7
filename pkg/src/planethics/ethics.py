"""Moral permissibility of plans as formula evaluation.

Each principle builds a propositional formula over grounded reason atoms
together with the truth assignment the plan induces; the verdict is the
formula's value under that assignment. Keeping formula and assignment
around (instead of just the boolean) is what lets the reasons module
extract why the verdict holds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import formula as fm
from .errors import InvalidPlan
from .model import IntrinsicValue, Plan, PlanningModel, check_goal, execute_plan, final_state_utility
from .planner import SearchBudget, enumerate_plans


class PrincipleId(enum.Enum):
    DEONTOLOGY = "deontology"
    ACT_UTILITARIAN = "act_utilitarian"
    DO_NO_HARM = "do_no_harm"
    DO_NO_INSTRUMENTAL_HARM = "do_no_instrumental_harm"
    DOUBLE_EFFECT = "double_effect"


class AtomKind(enum.Enum):
    BAD_ACTION = "BadAction"
    CAUSES_HARM = "CausesHarm"
    MEANS_TO_GOAL = "MeansToGoal"
    GOAL_FACT = "GoalFact"
    UTILITY_DOMINATED = "UtilityDominated"
    PROPORTIONALITY_HOLDS = "ProportionalityHolds"


@dataclass(frozen=True)
class ReasonAtom:
    """A grounded proposition a verdict can turn on, e.g. Bad(lie_frank)."""

    kind: AtomKind
    args: tuple = ()

    def __str__(self):
        if self.kind is AtomKind.BAD_ACTION:
            return f"Bad({self.args[0]})"
        if self.kind is AtomKind.CAUSES_HARM:
            return f"CausesHarm({self.args[0]}, {self.args[1]})"
        if self.kind is AtomKind.MEANS_TO_GOAL:
            return f"Means({self.args[0]})"
        if self.kind is AtomKind.GOAL_FACT:
            return f"GoalHarm({self.args[0]})"
        if self.kind is AtomKind.UTILITY_DOMINATED:
            return "Dominated"
        return "Proportional"

    def sort_key(self):
        return str(self)


def bad(action_name) -> ReasonAtom:
    return ReasonAtom(AtomKind.BAD_ACTION, (action_name,))


def causes_harm(action_name, fact) -> ReasonAtom:
    return ReasonAtom(AtomKind.CAUSES_HARM, (action_name, fact))


def means_to_goal(fact) -> ReasonAtom:
    return ReasonAtom(AtomKind.MEANS_TO_GOAL, (fact,))


def goal_fact(fact) -> ReasonAtom:
    return ReasonAtom(AtomKind.GOAL_FACT, (fact,))


def utility_dominated(plan_id) -> ReasonAtom:
    return ReasonAtom(AtomKind.UTILITY_DOMINATED, (plan_id,))


def proportionality_holds() -> ReasonAtom:
    return ReasonAtom(AtomKind.PROPORTIONALITY_HOLDS)


@dataclass(frozen=True)
class PrincipleFormula:
    """An NNF formula over reason atoms plus the plan-induced assignment."""

    formula: fm.Formula
    assignment: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))
        if not fm.is_nnf(self.formula):
            raise ValueError("principle formulas must be in negation normal form")
        missing = fm.atoms(self.formula) - set(self.assignment)
        if missing:
            raise ValueError(f"atoms without assignment: {sorted(map(str, missing))}")

    def holds(self) -> bool:
        return fm.evaluate(self.formula, self.assignment)


@dataclass(frozen=True)
class Verdict:
    permissible: bool
    principle: PrincipleId
    formula: PrincipleFormula
    bound_note: str | None = None


GOAL = "goal"  # consumer marker for links that support the goal condition


@dataclass(frozen=True)
class CausalLink:
    """steps[producer] adds `fact`, consumed by steps[consumer] or the goal."""

    producer: int
    fact: str
    consumer: object  # step index or GOAL


def causal_links(model: PlanningModel, plan: Plan):
    """Producer/consumer links of the plan, operationalizing "means".

    Each precondition fact of each step, and each goal fact, links back to
    the latest earlier step that added it; facts supplied only by the
    initial state produce no link.
    """
    links = []
    steps = [model.action(name) for name in plan.steps]

    def latest_producer(fact, before):
        for i in range(before - 1, -1, -1):
            if fact in steps[i].add_effects:
                return i
        return None

    for j, action in enumerate(steps):
        for fact in sorted(action.preconditions):
            i = latest_producer(fact, j)
            if i is not None:
                links.append(CausalLink(i, fact, j))
    for fact in sorted(model.goal):
        i = latest_producer(fact, len(steps))
        if i is not None:
            links.append(CausalLink(i, fact, GOAL))
    return links


def _require_solves(model, plan):
    try:
        executed = execute_plan(model, plan.steps)
    except Exception as exc:
        raise InvalidPlan(str(exc)) from exc
    if executed.trace != plan.trace:
        raise InvalidPlan("plan trace does not match execution on this model")
    if not check_goal(model, plan):
        raise InvalidPlan("plan does not satisfy the goal")


def _plan_actions(model, plan):
    """Distinct actions occurring in the plan, in canonical name order."""
    return [model.action(n) for n in sorted(set(plan.steps))]


def _harm_candidates(model, plan):
    """(action, fact) pairs where a plan step could introduce a harm."""
    pairs = []
    for action in _plan_actions(model, plan):
        for fact in sorted(action.add_effects):
            if model.utility.get(fact, 0) < 0:
                pairs.append((action.name, fact))
    return pairs


def _actually_caused(model, plan):
    """(action name, fact) pairs whose step toggled a harm false -> true."""
    caused = set()
    for i, name in enumerate(plan.steps):
        before, after = plan.trace[i], plan.trace[i + 1]
        for fact in after - before:
            if model.utility.get(fact, 0) < 0:
                caused.add((name, fact))
    return caused


def _bad_conjunct(model, plan):
    """Literals and assignment for "no step is intrinsically bad"."""
    literals = []
    assignment = {}
    for action in _plan_actions(model, plan):
        atom = bad(action.name)
        literals.append(fm.Not(fm.Atom(atom)))
        assignment[atom] = action.intrinsic is IntrinsicValue.BAD
    return literals, assignment


def _instrumental_harm_conjunct(model, plan):
    """Literals and assignment for "no caused harm is a means"."""
    caused = _actually_caused(model, plan)
    means_facts = {link.fact for link in causal_links(model, plan)}
    literals = []
    assignment = {}
    for action_name, fact in _harm_candidates(model, plan):
        ch = causes_harm(action_name, fact)
        mn = means_to_goal(fact)
        literals.append(fm.Or((fm.Not(fm.Atom(ch)), fm.Not(fm.Atom(mn)))))
        assignment[ch] = (action_name, fact) in caused
        assignment[mn] = fact in means_facts
    return literals, assignment


def evaluate(principle: PrincipleId, model: PlanningModel, plan: Plan,
             budget: SearchBudget = SearchBudget()) -> Verdict:
    """Judge the plan under the principle; the plan must solve the model."""
    _require_solves(model, plan)
    bound_note = None

    if principle is PrincipleId.DEONTOLOGY:
        literals, assignment = _bad_conjunct(model, plan)
        pf = PrincipleFormula(fm.And(tuple(literals)), assignment)

    elif principle is PrincipleId.ACT_UTILITARIAN:
        alternatives = enumerate_plans(model, budget)
        best = max(
            (final_state_utility(model, alt) for alt in alternatives),
            default=final_state_utility(model, plan),
        )
        atom = utility_dominated("; ".join(plan.steps) or "<empty>")
        dominated = final_state_utility(model, plan) < best
        pf = PrincipleFormula(fm.Not(fm.Atom(atom)), {atom: dominated})
        bound_note = (
            f"alternatives: {len(alternatives)} simple-path plans within "
            f"depth {budget.max_depth}, expansion budget {budget.max_expansions}"
        )

    elif principle is PrincipleId.DO_NO_HARM:
        caused = _actually_caused(model, plan)
        literals = []
        assignment = {}
        for action_name, fact in _harm_candidates(model, plan):
            atom = causes_harm(action_name, fact)
            literals.append(fm.Not(fm.Atom(atom)))
            assignment[atom] = (action_name, fact) in caused
        pf = PrincipleFormula(fm.And(tuple(literals)), assignment)

    elif principle is PrincipleId.DO_NO_INSTRUMENTAL_HARM:
        literals, assignment = _instrumental_harm_conjunct(model, plan)
        pf = PrincipleFormula(fm.And(tuple(literals)), assignment)

    elif principle is PrincipleId.DOUBLE_EFFECT:
        bad_lits, assignment = _bad_conjunct(model, plan)
        goal_lits = []
        for fact in model.harms():
            atom = goal_fact(fact)
            goal_lits.append(fm.Not(fm.Atom(atom)))
            assignment[atom] = fact in model.goal
        harm_lits, harm_assignment = _instrumental_harm_conjunct(model, plan)
        assignment.update(harm_assignment)
        prop = proportionality_holds()
        assignment[prop] = final_state_utility(model, plan) > 0
        literals = bad_lits + goal_lits + harm_lits + [fm.Atom(prop)]
        pf = PrincipleFormula(fm.And(tuple(literals)), assignment)

    else:
        raise ValueError(f"unknown principle: {principle!r}")

    return Verdict(
        permissible=pf.holds(),
        principle=principle,
        formula=pf,
        bound_note=bound_note,
    )
