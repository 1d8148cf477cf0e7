"""Cost-optimal planning and bounded plan enumeration.

find_plan runs uniform-cost search over (state, depth) nodes with
dominance pruning, so the returned plan is provably cheapest among all
plans of length <= max_depth. enumerate_plans walks every simple path
(no repeated state along the trace) up to the depth bound and keeps the
goal-satisfying ones; that bounded set is what consequentialist
evaluation treats as "the alternatives".
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass

from .errors import BudgetExceeded, NoPlanFound
from .model import Plan, PlanningModel, execute_plan


class Objective(enum.Enum):
    MIN_COST = "min_cost"
    MAX_UTILITY = "max_utility"


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 20
    max_expansions: int = 10**6

    def __post_init__(self):
        if self.max_depth <= 0 or self.max_expansions <= 0:
            raise ValueError("budget bounds must be positive")


def _sorted_actions(model: PlanningModel):
    return model.actions  # PlanningModel keeps these name-sorted


def find_plan(model: PlanningModel, objective=Objective.MIN_COST,
              budget: SearchBudget = SearchBudget()) -> Plan:
    """Return a goal-satisfying plan that is optimal for the objective.

    MIN_COST proves cost minimality within the depth bound; MAX_UTILITY
    picks the highest-utility member of the bounded alternative set,
    tie-breaking on lower cost, then lexicographic step names.
    """
    if objective is Objective.MAX_UTILITY:
        candidates = enumerate_plans(model, budget)
        if not candidates:
            raise NoPlanFound(provenance=model.provenance)
        best = max(
            candidates,
            key=lambda p: (model.state_utility(p.final_state()), -p.total_cost),
        )
        # max() keeps the first of equal keys; candidates are (cost, lex) sorted,
        # so the tie-break is already lower cost, then lexicographic steps.
        return best

    # Heap entries: (cost, steps) — lexicographic steps break cost ties, which
    # both fixes determinism and makes the returned plan canonical.
    frontier = [(0, (), model.init)]
    # state -> list of (cost, depth) Pareto-optimal nodes already expanded
    expanded = {}
    expansions = 0
    while frontier:
        cost, steps, state = heapq.heappop(frontier)
        if model.goal <= state:
            return execute_plan(model, steps)
        depth = len(steps)
        front = expanded.setdefault(state, [])
        if any(c <= cost and d <= depth for c, d in front):
            continue
        front.append((cost, depth))
        if depth >= budget.max_depth:
            continue
        expansions += 1
        if expansions > budget.max_expansions:
            raise BudgetExceeded(
                f"expansion budget {budget.max_expansions} hit before optimality proof"
            )
        for action in _sorted_actions(model):
            if action.applicable(state):
                succ = (state - action.del_effects) | action.add_effects
                heapq.heappush(frontier, (cost + action.cost, steps + (action.name,), succ))
    raise NoPlanFound(provenance=model.provenance)


def enumerate_plans(model: PlanningModel, budget: SearchBudget = SearchBudget()):
    """All goal-satisfying simple-path plans with at most max_depth steps.

    Simple path: no state occurs twice in the trace. Results are sorted by
    (total cost, lexicographic step names).
    """
    results = []
    expansions = 0
    actions = _sorted_actions(model)

    def walk(state, steps, cost, seen):
        nonlocal expansions
        if model.goal <= state:
            results.append((cost, steps))
        if len(steps) >= budget.max_depth:
            return
        expansions += 1
        if expansions > budget.max_expansions:
            raise BudgetExceeded(
                f"expansion budget {budget.max_expansions} hit during enumeration"
            )
        for action in actions:
            if action.applicable(state):
                succ = (state - action.del_effects) | action.add_effects
                if succ in seen:
                    continue
                walk(succ, steps + (action.name,), cost + action.cost, seen | {succ})

    walk(model.init, (), 0, {model.init})
    results.sort()
    return [execute_plan(model, steps) for _, steps in results]
