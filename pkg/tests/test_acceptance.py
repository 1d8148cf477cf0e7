"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import time
from random import Random

import pytest

from planethics import formula as fm
from planethics.cli import main
from planethics.compilation import (
    check_suggestion_satisfied,
    compile_chain,
    compile_suggestion,
    forbid,
    force,
    order,
    parse_suggestion,
    replace,
)
from planethics.errors import ConflictingSuggestion, NoPlanFound, ValidationFailed
from planethics.ethics import PrincipleId, bad, evaluate
from planethics.explain import ExplanationProblem, explain_against_hmodel
from planethics.compilation import HModelResult
from planethics.fixtures import robot_and_frank, robot_and_frank_texts
from planethics.model import Action, PlanningModel, execute_plan
from planethics.parser import parse_model, serialize_model
from planethics.planner import Objective, SearchBudget, enumerate_plans, find_plan
from planethics.reasons import prime_implicants, prime_implicates, reasons_for, to_clausal_form
from planethics.service import SessionStore

from conftest import (
    brute_force_min_cost,
    brute_force_simple_plans,
    brute_prime_implicants,
    brute_prime_implicates,
    random_formula,
    random_model,
)

REFERENCE_SENTENCE = (
    "The original plan is impermissible because lying to Frank is bad, "
    "whereas the HPlan is permissible because begging Frank is not bad"
)


def _report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"{status}: {name}{suffix}")
    assert ok, f"{name}{suffix}"


def test_worked_example_end_to_end(tmp_path, capsys):
    domain, problem = robot_and_frank_texts()
    dom = tmp_path / "frank.dom"
    prob = tmp_path / "frank.prob"
    dom.write_text(domain)
    prob.write_text(problem)
    started = time.perf_counter()
    code = main([
        "explain", "-d", str(dom), "-p", str(prob),
        "--suggest", "replace lie_frank with beg_frank",
        "--principle", "deontology",
    ])
    elapsed = time.perf_counter() - started
    out = capsys.readouterr().out
    with capsys.disabled():
        _report(
            "worked-example end-to-end sentence",
            code == 0 and out == REFERENCE_SENTENCE + "\n" and elapsed < 1.0,
            f"exit={code}, {elapsed * 1000:.0f} ms",
        )


def test_reason_reproduction():
    model = robot_and_frank()
    plan = execute_plan(model, ["lie_frank", "exercise"])
    verdict = evaluate(PrincipleId.DEONTOLOGY, model, plan)
    reasons = reasons_for(verdict)
    target = frozenset({(bad("lie_frank"), True)})
    ok = (
        not verdict.permissible
        and [r.literals for r in reasons.sufficient] == [target]
        and [r.literals for r in reasons.necessary] == [target]
        and reasons.sufficient[0].sufficient_and_necessary
        and reasons.necessary[0].sufficient_and_necessary
    )
    _report("deontological reason Bad(lie_frank) is sufficient-and-necessary", ok)


def test_prime_implicate_oracle_equivalence():
    rng = Random(20260808)
    atoms = ["a", "b", "c", "d"]
    total = 500
    agree = 0
    started = time.perf_counter()
    for _ in range(total):
        formula = random_formula(rng, atoms, max_depth=3)
        implicates_ok = (
            set(prime_implicates(to_clausal_form(formula)))
            == brute_prime_implicates(formula)
        )
        implicants_ok = set(prime_implicants(formula)) == brute_prime_implicants(formula)
        agree += implicates_ok and implicants_ok
    elapsed = time.perf_counter() - started
    _report(
        "prime implicate/implicant oracle equivalence",
        agree == total and elapsed < 30.0,
        f"{agree}/{total} formulas, {elapsed:.1f} s",
    )


def test_planner_optimality_oracle():
    rng = Random(31415)
    total = 200
    agree = 0
    budget = SearchBudget(max_depth=6)
    started = time.perf_counter()
    for _ in range(total):
        model = random_model(rng, max_facts=6, max_actions=5)
        expected = brute_force_min_cost(model, budget.max_depth)
        try:
            plan = find_plan(model, Objective.MIN_COST, budget)
            agree += expected is not None and plan.total_cost == expected
        except NoPlanFound:
            agree += expected is None
    elapsed = time.perf_counter() - started
    _report(
        "planner cost optimality vs exhaustive search",
        agree == total and elapsed < 60.0,
        f"{agree}/{total} models, {elapsed:.1f} s",
    )


def _random_suggestion(rng, model):
    names = sorted(model.action_map)
    kind = rng.choice(["forbid", "force", "replace", "order"])
    if kind in ("replace", "order") and len(names) < 2:
        kind = rng.choice(["forbid", "force"])
    if kind == "forbid":
        return forbid(rng.choice(names))
    if kind == "force":
        return force(rng.choice(names))
    a, b = rng.sample(names, 2)
    return replace(a, b) if kind == "replace" else order(a, b)


def test_compilation_soundness_and_completeness():
    rng = Random(2718)
    budget = SearchBudget(max_depth=4)
    total = 200
    pairs = 0
    sound = complete = True
    while pairs < total:
        model = random_model(rng)
        suggestion = _random_suggestion(rng, model)
        try:
            hmodel = compile_suggestion(model, suggestion).hmodel
        except ConflictingSuggestion:
            continue
        pairs += 1
        hmodel_plans = {p.steps for p in enumerate_plans(hmodel, budget)}
        sound = sound and all(
            check_suggestion_satisfied(suggestion, steps) for steps in hmodel_plans
        )
        satisfying = {
            p.steps
            for p in enumerate_plans(model, budget)
            if check_suggestion_satisfied(suggestion, p.steps)
        }
        complete = complete and satisfying <= hmodel_plans
    _report(
        "compilation soundness and completeness",
        sound and complete and pairs == total,
        f"{pairs} (model, suggestion) pairs",
    )


def test_iteration_law():
    domain, problem = robot_and_frank_texts()
    checks = []

    # canonical case on the bundled model
    store = SessionStore()
    session = store.create_session(domain, problem)
    sigma = parse_suggestion("forbid lie_frank")
    sigma_prime = parse_suggestion("order beg_frank before exercise")
    index, _ = store.suggest(session.id, sigma.id, PrincipleId.DEONTOLOGY)
    store.commit(session.id, index)
    _, entry = store.suggest(session.id, sigma_prime.id, PrincipleId.DEONTOLOGY)
    checks.append(entry.hmodel == compile_chain(session.base_model, [sigma, sigma_prime]).hmodel)

    # random suggestion pairs on random solvable models
    rng = Random(1234)
    done = 0
    while done < 40:
        model = random_model(rng, zero_cost_ok=False, name="rand")
        dom_doc, prob_doc = serialize_model(model)
        random_store = SessionStore()
        try:
            rand_session = random_store.create_session(dom_doc.text, prob_doc.text,
                                                       budget=SearchBudget(max_depth=5))
        except NoPlanFound:
            continue
        s1 = _random_suggestion(rng, rand_session.current_model)
        try:
            i1, _ = random_store.suggest(rand_session.id, s1.id, PrincipleId.DEONTOLOGY)
            random_store.commit(rand_session.id, i1)
            if not rand_session.current_model.actions:
                continue
            s2 = _random_suggestion(rng, rand_session.current_model)
            _, entry2 = random_store.suggest(rand_session.id, s2.id, PrincipleId.DEONTOLOGY)
        except (NoPlanFound, ValidationFailed, ConflictingSuggestion):
            continue
        chained = compile_chain(rand_session.base_model, [s1, s2]).hmodel
        checks.append(entry2.hmodel == chained)
        done += 1

    _report(
        "iteration law: commit then suggest equals chained compilation",
        all(checks),
        f"{len(checks)} cases",
    )


def test_principle_subsumption():
    rng = Random(5555)
    budget = SearchBudget(max_depth=4)
    total = 200
    fixtures = 0
    violations = 0
    plans_checked = 0
    while fixtures < total:
        model = random_model(rng)
        plans = enumerate_plans(model, budget)
        fixtures += 1
        for plan in plans[:4]:
            plans_checked += 1
            if evaluate(PrincipleId.DOUBLE_EFFECT, model, plan, budget).permissible:
                deon = evaluate(PrincipleId.DEONTOLOGY, model, plan, budget).permissible
                dnih = evaluate(
                    PrincipleId.DO_NO_INSTRUMENTAL_HARM, model, plan, budget
                ).permissible
                if not (deon and dnih):
                    violations += 1
    _report(
        "double effect implies deontology and no-instrumental-harm",
        violations == 0 and fixtures == total,
        f"{fixtures} fixtures, {plans_checked} plans, {violations} violations",
    )


def test_validation_gate():
    model = robot_and_frank()
    plan = find_plan(model)
    magic = Action("magic_fix", add_effects={"healthy"}, cost=0)
    crafted = PlanningModel(
        name=model.name,
        facts=model.facts,
        actions=model.actions + (magic,),
        init=model.init,
        goal=model.goal,
        utility=model.utility,
        display=model.display,
        provenance=("force magic_fix",),
    )
    problem = ExplanationProblem(model, plan, parse_suggestion("force beg_frank"),
                                 PrincipleId.DEONTOLOGY)
    try:
        explain_against_hmodel(problem, HModelResult(hmodel=crafted))
        produced_explanation = True
        failed_at = None
    except ValidationFailed as exc:
        produced_explanation = False
        failed_at = exc.step_index
    _report(
        "inapplicable hypothetical plan stops at validation",
        not produced_explanation and failed_at is not None,
        f"failed at step {failed_at}",
    )


def test_parser_round_trip():
    rng = Random(8888)
    total = 200
    agree = 0
    for i in range(total):
        model = random_model(rng, name=f"m{i}")
        if rng.random() < 0.3:
            model = PlanningModel(
                name=model.name, facts=model.facts, actions=model.actions,
                init=model.init, goal=model.goal, utility=model.utility,
                display={a.name: f"doing {a.name}" for a in model.actions[:2]},
                provenance=("forbid a9", "force a8")[: rng.randint(0, 2)],
            )
        domain, problem = serialize_model(model)
        agree += parse_model(domain, problem) == model
    _report("parser round-trip identity", agree == total, f"{agree}/{total} models")
