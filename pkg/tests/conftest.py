"""Shared generators and brute-force oracles.

The oracles are deliberately dumb: exhaustive action-sequence search for
planning, truth tables plus subset-minimality for implicates/implicants.
They are the ground truth the real implementations are measured against.
"""

from __future__ import annotations

import itertools
from random import Random

import pytest
from hypothesis import strategies as st

from planethics import formula as fm
from planethics.model import Action, IntrinsicValue, PlanningModel

# ---------------------------------------------------------------- models


def random_model(rng: Random, max_facts=6, max_actions=5, zero_cost_ok=True,
                 name="m") -> PlanningModel:
    nf = rng.randint(2, max_facts)
    facts = [f"f{i}" for i in range(nf)]
    na = rng.randint(1, max_actions)
    actions = []
    for i in range(na):
        pre = rng.sample(facts, rng.randint(0, min(2, nf)))
        add = rng.sample(facts, rng.randint(1, min(3, nf)))
        dele = rng.sample(facts, rng.randint(0, min(2, nf)))
        low = 0 if zero_cost_ok else 1
        actions.append(Action(
            name=f"a{i}",
            preconditions=frozenset(pre),
            add_effects=frozenset(add),
            del_effects=frozenset(dele),
            cost=rng.randint(low, 3),
            intrinsic=rng.choice(list(IntrinsicValue)),
        ))
    init = frozenset(f for f in facts if rng.random() < 0.4)
    goal = frozenset(rng.sample(facts, rng.randint(1, 2)))
    utility = {f: rng.randint(-10, 10) for f in facts if rng.random() < 0.5}
    return PlanningModel(
        name=name,
        facts=frozenset(facts),
        actions=tuple(actions),
        init=init,
        goal=goal,
        utility=utility,
    )


@st.composite
def models(draw, max_facts=6, max_actions=5):
    nf = draw(st.integers(2, max_facts))
    facts = [f"f{i}" for i in range(nf)]
    na = draw(st.integers(1, max_actions))
    actions = []
    for i in range(na):
        actions.append(Action(
            name=f"a{i}",
            preconditions=frozenset(draw(st.sets(st.sampled_from(facts), max_size=2))),
            add_effects=frozenset(draw(st.sets(st.sampled_from(facts), min_size=1, max_size=3))),
            del_effects=frozenset(draw(st.sets(st.sampled_from(facts), max_size=2))),
            cost=draw(st.integers(0, 3)),
            intrinsic=draw(st.sampled_from(list(IntrinsicValue))),
        ))
    init = frozenset(draw(st.sets(st.sampled_from(facts), max_size=nf)))
    goal = frozenset(draw(st.sets(st.sampled_from(facts), min_size=1, max_size=2)))
    utility = draw(st.dictionaries(st.sampled_from(facts), st.integers(-10, 10), max_size=nf))
    display = draw(st.dictionaries(
        st.sampled_from(facts + [a.name for a in actions]),
        st.text(alphabet="abc xyz", min_size=1, max_size=8),
        max_size=3,
    ))
    provenance = tuple(draw(st.lists(
        st.sampled_from(["forbid a0", "force a0", "replace a0 with a1",
                         "order a0 before a1"]),
        max_size=2,
    )))
    return PlanningModel(
        name=draw(st.sampled_from(["m", "dom_x", "trial_1"])),
        facts=frozenset(facts),
        actions=tuple(actions),
        init=init,
        goal=goal,
        utility=utility,
        display=display,
        provenance=provenance,
    )


def apply_raw(state, action):
    return (state - action.del_effects) | action.add_effects


def brute_force_min_cost(model: PlanningModel, max_depth: int):
    """Cheapest goal-reaching cost over ALL applicable sequences of length <= max_depth."""
    best = None

    def walk(state, cost, depth):
        nonlocal best
        if model.goal <= state:
            best = cost if best is None else min(best, cost)
        if depth == max_depth:
            return
        for action in model.actions:
            if action.applicable(state):
                walk(apply_raw(state, action), cost + action.cost, depth + 1)

    walk(model.init, 0, 0)
    return best


def brute_force_simple_plans(model: PlanningModel, max_depth: int):
    """All goal-satisfying simple-path step tuples with <= max_depth steps."""
    found = set()

    def walk(state, steps, seen):
        if model.goal <= state:
            found.add(steps)
        if len(steps) == max_depth:
            return
        for action in model.actions:
            if action.applicable(state):
                succ = apply_raw(state, action)
                if succ not in seen:
                    walk(succ, steps + (action.name,), seen | {succ})

    walk(model.init, (), {model.init})
    return found


# ---------------------------------------------------------------- formulas


def random_formula(rng: Random, atom_pool, max_depth=3) -> fm.Formula:
    if max_depth == 0 or rng.random() < 0.3:
        node = fm.Atom(rng.choice(atom_pool))
        return fm.Not(node) if rng.random() < 0.4 else node
    op = rng.choice(["and", "or", "not"])
    if op == "not":
        return fm.Not(random_formula(rng, atom_pool, max_depth - 1))
    children = tuple(
        random_formula(rng, atom_pool, max_depth - 1)
        for _ in range(rng.randint(1, 3))
    )
    return fm.And(children) if op == "and" else fm.Or(children)


@st.composite
def formulas(draw, atom_pool=("a", "b", "c", "d"), max_depth=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_formula(Random(seed), list(atom_pool), max_depth)


def all_assignments(atom_pool):
    atom_pool = sorted(atom_pool, key=str)
    for bits in itertools.product([False, True], repeat=len(atom_pool)):
        yield dict(zip(atom_pool, bits))


def formulas_equivalent(f, g) -> bool:
    pool = fm.atoms(f) | fm.atoms(g)
    return all(
        fm.evaluate(f, a) == fm.evaluate(g, a) for a in all_assignments(pool)
    )


def _clause_satisfied(clause, assignment) -> bool:
    return any(assignment[atom] == pol for atom, pol in clause)


def _entails_clause(formula, clause, pool) -> bool:
    return all(
        _clause_satisfied(clause, a)
        for a in all_assignments(pool)
        if fm.evaluate(formula, a)
    )


def brute_prime_implicates(formula):
    """Every clause over the formula's atoms that is entailed and subset-minimal."""
    pool = sorted(fm.atoms(formula), key=str)
    entailed = []
    for k in range(len(pool) + 1):
        for atoms_sel in itertools.combinations(pool, k):
            for pols in itertools.product([False, True], repeat=k):
                clause = frozenset(zip(atoms_sel, pols))
                if _entails_clause(formula, clause, pool):
                    entailed.append(clause)
    return {c for c in entailed if not any(o < c for o in entailed)}


def brute_prime_implicants(formula):
    """Every consistent term over the formula's atoms that entails it, subset-minimal."""
    pool = sorted(fm.atoms(formula), key=str)
    entailing = []
    for k in range(len(pool) + 1):
        for atoms_sel in itertools.combinations(pool, k):
            for pols in itertools.product([False, True], repeat=k):
                term = frozenset(zip(atoms_sel, pols))
                ok = all(
                    fm.evaluate(formula, a)
                    for a in all_assignments(pool)
                    if all(a[atom] == pol for atom, pol in term)
                )
                if ok:
                    entailing.append(term)
    return {t for t in entailing if not any(o < t for o in entailing)}


@pytest.fixture
def frank():
    from planethics.fixtures import robot_and_frank

    return robot_and_frank()
