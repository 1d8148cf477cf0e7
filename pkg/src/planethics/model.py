"""Grounded planning model with ethical annotations, and plan execution.

States are frozensets of fact names. Actions are STRIPS-style with
delete-then-add semantics: apply(s, a) = (s - del) | add. Every action
carries a cost and an intrinsic moral value; utilities attach to facts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import PreconditionViolation, UnknownAction

# Facts introduced by suggestion compilation carry this reserved prefix.
AUX_PREFIX = "__aux_"


class IntrinsicValue(enum.Enum):
    GOOD = "good"
    NEUTRAL = "neutral"
    BAD = "bad"


@dataclass(frozen=True)
class Action:
    """A deterministic, durationless grounded action.

    A fact in both effect sets collapses to a net add (delete-then-add),
    so add_effects and del_effects are disjoint after construction.
    """

    name: str
    preconditions: frozenset = frozenset()
    add_effects: frozenset = frozenset()
    del_effects: frozenset = frozenset()
    cost: int = 1
    intrinsic: IntrinsicValue = IntrinsicValue.NEUTRAL

    def __post_init__(self):
        object.__setattr__(self, "preconditions", frozenset(self.preconditions))
        object.__setattr__(self, "add_effects", frozenset(self.add_effects))
        object.__setattr__(
            self, "del_effects", frozenset(self.del_effects) - frozenset(self.add_effects)
        )
        if self.cost < 0:
            raise ValueError(f"action {self.name}: cost must be non-negative")

    def mentioned_facts(self):
        return self.preconditions | self.add_effects | self.del_effects

    def applicable(self, state) -> bool:
        return self.preconditions <= state


@dataclass(frozen=True)
class PlanningModel:
    """A planning problem plus its ethical annotations.

    `utility` maps facts to signed integers (absent facts score 0; negative
    means harm). `display` maps action/fact names to natural-language
    phrases used by explanation rendering. `provenance` lists the ids of
    the suggestions compiled into this model, in order; a model with
    non-empty provenance is a hypothetical model (HModel).
    """

    name: str
    facts: frozenset
    actions: tuple
    init: frozenset
    goal: frozenset
    utility: Mapping[str, int] = field(default_factory=dict)
    display: Mapping[str, str] = field(default_factory=dict)
    provenance: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "facts", frozenset(self.facts))
        object.__setattr__(
            self, "actions", tuple(sorted(self.actions, key=lambda a: a.name))
        )
        object.__setattr__(self, "init", frozenset(self.init))
        object.__setattr__(self, "goal", frozenset(self.goal))
        object.__setattr__(self, "utility", dict(self.utility))
        object.__setattr__(self, "display", dict(self.display))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        self._validate()

    def _validate(self):
        names = [a.name for a in self.actions]
        if len(names) != len(set(names)):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate action names: {dupes}")
        if not self.init <= self.facts:
            raise ValueError(f"init mentions undeclared facts: {sorted(self.init - self.facts)}")
        if not self.goal <= self.facts:
            raise ValueError(f"goal mentions undeclared facts: {sorted(self.goal - self.facts)}")
        for action in self.actions:
            loose = action.mentioned_facts() - self.facts
            if loose:
                raise ValueError(
                    f"action {action.name} mentions undeclared facts: {sorted(loose)}"
                )
        for fact in self.utility:
            if fact not in self.facts:
                raise ValueError(f"utility entry for undeclared fact: {fact}")

    @cached_property
    def action_map(self):
        return {a.name: a for a in self.actions}

    def action(self, name) -> Action:
        try:
            return self.action_map[name]
        except KeyError:
            raise UnknownAction(name) from None

    def is_hmodel(self) -> bool:
        return bool(self.provenance)

    def harms(self):
        """Facts with negative utility, canonically ordered."""
        return sorted(f for f, u in self.utility.items() if u < 0)

    def state_utility(self, state) -> int:
        return sum(self.utility.get(f, 0) for f in state)


@dataclass(frozen=True)
class Plan:
    """An executed action sequence: steps, the induced state trace, total cost.

    trace[0] is the initial state and trace[i+1] the state after steps[i].
    """

    steps: tuple
    trace: tuple
    total_cost: int

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "trace", tuple(frozenset(s) for s in self.trace))

    def final_state(self):
        return self.trace[-1]

    def __len__(self):
        return len(self.steps)


def apply_action(state, action: Action):
    """Successor state of `state` under `action` (delete-then-add)."""
    state = frozenset(state)
    if not action.applicable(state):
        raise PreconditionViolation(action.name, action.preconditions - state)
    return (state - action.del_effects) | action.add_effects


def execute_plan(model: PlanningModel, steps: Iterable[str]) -> Plan:
    """Run the named actions from the model's initial state.

    Fails on the first unknown or inapplicable action. Goal satisfaction is
    not required; see check_goal.
    """
    steps = list(steps)
    state = model.init
    trace = [state]
    cost = 0
    for i, name in enumerate(steps):
        action = model.action(name)
        if not action.applicable(state):
            raise PreconditionViolation(name, action.preconditions - state, step_index=i)
        state = apply_action(state, action)
        trace.append(state)
        cost += action.cost
    return Plan(steps=tuple(steps), trace=tuple(trace), total_cost=cost)


def check_goal(model: PlanningModel, plan: Plan) -> bool:
    return model.goal <= plan.final_state()


def final_state_utility(model: PlanningModel, plan: Plan) -> int:
    return model.state_utility(plan.final_state())
