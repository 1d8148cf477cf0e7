"""Compile moderator suggestions into hypothetical models.

Each suggestion kind is a small model-to-model transformation:

  forbid a             remove the action
  force a              fresh goal fact __aux_forced_a added by a
  replace a with b     forbid a composed with force b
  order a before b     fresh fact __aux_done_a added by a, required by b

The transformed model (HModel) records the suggestion id in its
provenance; plans found for it are validated against the original model
before any ethical comparison.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    ConflictingSuggestion,
    ModelSyntaxError,
    PlanEthicsError,
    UnknownAction,
    ValidationFailed,
)
from .model import AUX_PREFIX, Action, PlanningModel, Plan, execute_plan

FORBID = "forbid"
FORCE = "force"
REPLACE = "replace"
ORDER = "order"


@dataclass(frozen=True)
class Suggestion:
    """A moderator constraint on admissible plans."""

    kind: str
    actions: tuple

    def __post_init__(self):
        if self.kind not in (FORBID, FORCE, REPLACE, ORDER):
            raise ValueError(f"unknown suggestion kind: {self.kind}")
        expected = 1 if self.kind in (FORBID, FORCE) else 2
        if len(self.actions) != expected:
            raise ValueError(f"{self.kind} takes {expected} action(s)")
        if expected == 2 and self.actions[0] == self.actions[1]:
            raise ValueError(f"{self.kind} needs two distinct actions")

    @property
    def id(self) -> str:
        if self.kind == FORBID:
            return f"forbid {self.actions[0]}"
        if self.kind == FORCE:
            return f"force {self.actions[0]}"
        if self.kind == REPLACE:
            return f"replace {self.actions[0]} with {self.actions[1]}"
        return f"order {self.actions[0]} before {self.actions[1]}"

    def __str__(self):
        return self.id


def forbid(action) -> Suggestion:
    return Suggestion(FORBID, (action,))


def force(action) -> Suggestion:
    return Suggestion(FORCE, (action,))


def replace(forbidden, forced) -> Suggestion:
    return Suggestion(REPLACE, (forbidden, forced))


def order(earlier, later) -> Suggestion:
    return Suggestion(ORDER, (earlier, later))


_GRAMMAR = [
    (FORBID, re.compile(r"^forbid\s+(\S+)$")),
    (FORCE, re.compile(r"^force\s+(\S+)$")),
    (REPLACE, re.compile(r"^replace\s+(\S+)\s+with\s+(\S+)$")),
    (ORDER, re.compile(r"^order\s+(\S+)\s+before\s+(\S+)$")),
]


def parse_suggestion(text: str) -> Suggestion:
    """Parse `forbid NAME | force NAME | replace NAME with NAME | order NAME before NAME`."""
    stripped = text.strip()
    for kind, pattern in _GRAMMAR:
        m = pattern.match(stripped)
        if m:
            try:
                return Suggestion(kind, m.groups())
            except ValueError as exc:
                raise ModelSyntaxError(f"bad suggestion {text!r}: {exc}") from exc
    raise ModelSyntaxError(
        f"bad suggestion {text!r}: expected 'forbid NAME', 'force NAME', "
        f"'replace NAME with NAME' or 'order NAME before NAME'"
    )


@dataclass(frozen=True)
class HModelResult:
    hmodel: PlanningModel
    introduced_facts: frozenset = field(default_factory=frozenset)


def _forbidden_in(provenance):
    out = set()
    for sid in provenance:
        parts = sid.split()
        if parts[0] == FORBID:
            out.add(parts[1])
        elif parts[0] == REPLACE:
            out.add(parts[1])
    return out


def _forced_in(provenance):
    out = set()
    for sid in provenance:
        parts = sid.split()
        if parts[0] == FORCE:
            out.add(parts[1])
        elif parts[0] == REPLACE:
            out.add(parts[3])
    return out


def _fresh_fact(model, base):
    if base not in model.facts:
        return base
    n = 2
    while f"{base}_{n}" in model.facts:
        n += 1
    return f"{base}_{n}"


def _replace_action(actions, name, new_action):
    return tuple(new_action if a.name == name else a for a in actions)


def compile_suggestion(model: PlanningModel, suggestion: Suggestion) -> HModelResult:
    """Produce the HModel whose solutions honor the suggestion.

    Raises UnknownAction for references outside the model and
    ConflictingSuggestion when the suggestion directly contradicts one
    already recorded in the model's provenance. Never mutates its input.
    """
    previously_forbidden = _forbidden_in(model.provenance)
    previously_forced = _forced_in(model.provenance)

    def check_conflicts(forbidding=(), forcing=()):
        for name in forbidding:
            if name in previously_forced:
                raise ConflictingSuggestion(
                    f"cannot forbid {name}: an earlier suggestion forces it"
                )
        for name in forcing:
            if name in previously_forbidden:
                raise ConflictingSuggestion(
                    f"cannot force {name}: an earlier suggestion forbids it"
                )

    def require(name):
        if name not in model.action_map:
            raise UnknownAction(name)
        return model.action(name)

    introduced = set()
    facts, actions, goal = model.facts, model.actions, model.goal

    if suggestion.kind in (FORBID, REPLACE):
        check_conflicts(forbidding=[suggestion.actions[0]])
    if suggestion.kind in (FORCE, REPLACE):
        check_conflicts(forcing=[suggestion.actions[-1]])
    if suggestion.kind == ORDER:
        check_conflicts()  # order never conflicts syntactically

    if suggestion.kind in (FORBID, REPLACE):
        target = require(suggestion.actions[0])
        actions = tuple(a for a in actions if a.name != target.name)

    if suggestion.kind in (FORCE, REPLACE):
        name = suggestion.actions[-1]
        target = require(name)
        marker = _fresh_fact(model, f"{AUX_PREFIX}forced_{name}")
        introduced.add(marker)
        facts = facts | {marker}
        goal = goal | {marker}
        updated = Action(
            name=target.name,
            preconditions=target.preconditions,
            add_effects=target.add_effects | {marker},
            del_effects=target.del_effects,
            cost=target.cost,
            intrinsic=target.intrinsic,
        )
        actions = _replace_action(actions, name, updated)

    if suggestion.kind == ORDER:
        earlier = require(suggestion.actions[0])
        later = require(suggestion.actions[1])
        marker = _fresh_fact(model, f"{AUX_PREFIX}done_{earlier.name}")
        introduced.add(marker)
        facts = facts | {marker}
        new_earlier = Action(
            name=earlier.name,
            preconditions=earlier.preconditions,
            add_effects=earlier.add_effects | {marker},
            del_effects=earlier.del_effects,
            cost=earlier.cost,
            intrinsic=earlier.intrinsic,
        )
        actions = _replace_action(actions, earlier.name, new_earlier)
        new_later = Action(
            name=later.name,
            preconditions=later.preconditions | {marker},
            add_effects=later.add_effects,
            del_effects=later.del_effects,
            cost=later.cost,
            intrinsic=later.intrinsic,
        )
        actions = _replace_action(actions, later.name, new_later)

    # Forbid orphans the removed action's display entry; keep the map valid.
    remaining = {a.name for a in actions}
    display = {k: v for k, v in model.display.items() if k in facts or k in remaining}

    hmodel = PlanningModel(
        name=model.name,
        facts=facts,
        actions=actions,
        init=model.init,
        goal=goal,
        utility=model.utility,
        display=display,
        provenance=model.provenance + (suggestion.id,),
    )
    return HModelResult(hmodel=hmodel, introduced_facts=frozenset(introduced))


def compile_chain(model: PlanningModel, suggestions) -> HModelResult:
    """Left fold of compile_suggestion; provenance lists all ids in order."""
    introduced = set()
    current = model
    for index, suggestion in enumerate(suggestions):
        try:
            result = compile_suggestion(current, suggestion)
        except PlanEthicsError as exc:
            exc.chain_index = index
            raise
        current = result.hmodel
        introduced |= result.introduced_facts
    return HModelResult(hmodel=current, introduced_facts=frozenset(introduced))


def strip_auxiliaries(original: PlanningModel, plan) -> list:
    """Validate a hypothetical plan against the original model.

    Auxiliary facts live only in HModel states, so the step list itself
    needs no rewriting; the steps are re-executed in the original model and
    returned unchanged when applicable. Raises ValidationFailed (with the
    failing step index) otherwise.
    """
    steps = list(plan.steps) if isinstance(plan, Plan) else list(plan)
    for index, name in enumerate(steps):
        if name not in original.action_map:
            raise ValidationFailed(index, f"action {name} does not exist in the original model")
    try:
        execute_plan(original, steps)
    except PlanEthicsError as exc:
        index = getattr(exc, "step_index", None)
        raise ValidationFailed(index if index is not None else 0, str(exc)) from exc
    return steps


def check_suggestion_satisfied(suggestion: Suggestion, steps) -> bool:
    """Does the step list honor the suggestion? Used as the compilation oracle."""
    steps = list(steps)
    if suggestion.kind == FORBID:
        return suggestion.actions[0] not in steps
    if suggestion.kind == FORCE:
        return suggestion.actions[0] in steps
    if suggestion.kind == REPLACE:
        forbidden, forced = suggestion.actions
        return forbidden not in steps and forced in steps
    earlier, later = suggestion.actions
    seen_earlier = False
    for name in steps:
        if name == earlier:
            seen_earlier = True
        elif name == later and not seen_earlier:
            return False
    return True
