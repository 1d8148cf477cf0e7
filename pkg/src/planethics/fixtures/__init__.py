"""Bundled example models.

robot_and_frank is the canonical care-robot dilemma: lying is the cheap
way to motivate Frank, begging the neutral one; a cost-optimal planner
picks lying, which is where the moderator steps in. medicine and shield
are small constructed cases for the harm-sensitive principles.
"""

from __future__ import annotations

from importlib import resources

from ..model import Action, IntrinsicValue, PlanningModel
from ..parser import SourceDocument, parse_model


def robot_and_frank_texts():
    """(domain text, problem text) of the bundled fixture files."""
    base = resources.files(__package__)
    return (
        base.joinpath("robot_frank.dom").read_text(encoding="utf-8"),
        base.joinpath("robot_frank.prob").read_text(encoding="utf-8"),
    )


def robot_and_frank() -> PlanningModel:
    domain, problem = robot_and_frank_texts()
    return parse_model(
        SourceDocument(domain, "robot_frank.dom"),
        SourceDocument(problem, "robot_frank.prob"),
    )


def medicine() -> PlanningModel:
    """Curing has a painful side effect; the harm is not a means to the cure."""
    return PlanningModel(
        name="medicine",
        facts={"cured", "side_pain"},
        actions=(
            Action("treat", add_effects={"cured", "side_pain"}),
        ),
        init=frozenset(),
        goal={"cured"},
        utility={"cured": 10, "side_pain": -3},
        display={"treat": "treating the patient", "side_pain": "the side pain",
                 "cured": "the cure"},
    )


def shield() -> PlanningModel:
    """The harm is a precondition of the goal-producing action: harm as a means."""
    return PlanningModel(
        name="shield",
        facts={"bystander_hurt", "safe"},
        actions=(
            Action("push_bystander", add_effects={"bystander_hurt"},
                   intrinsic=IntrinsicValue.NEUTRAL),
            Action("shield_behind", preconditions={"bystander_hurt"},
                   add_effects={"safe"}),
        ),
        init=frozenset(),
        goal={"safe"},
        utility={"bystander_hurt": -5, "safe": 10},
        display={"push_bystander": "pushing the bystander",
                 "bystander_hurt": "hurting the bystander"},
    )
