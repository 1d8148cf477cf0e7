"""Exception types shared across the package."""

from __future__ import annotations


class PlanEthicsError(Exception):
    """Base class for all errors raised by this package."""


class ModelSyntaxError(PlanEthicsError):
    """Malformed domain/problem/suggestion text. Carries the source position."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)


class ModelSemanticError(PlanEthicsError):
    """Well-formed text that violates model rules (unknown fact, duplicate action, ...)."""


class UnknownAction(PlanEthicsError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown action: {name}")


class PreconditionViolation(PlanEthicsError):
    def __init__(self, action, missing, step_index=None):
        self.action = action
        self.missing = frozenset(missing)
        self.step_index = step_index
        where = "" if step_index is None else f" at step {step_index}"
        super().__init__(
            f"action {action} not applicable{where}: missing {sorted(self.missing)}"
        )


class NoPlanFound(PlanEthicsError):
    """Search space exhausted without reaching the goal."""

    def __init__(self, message="no plan reaches the goal", provenance=()):
        self.provenance = list(provenance)
        if self.provenance:
            message = f"{message} (after: {', '.join(self.provenance)})"
        super().__init__(message)


class BudgetExceeded(PlanEthicsError):
    """Search budget hit before a proof of optimality or exhaustion."""


class SizeExceeded(PlanEthicsError):
    """Formula machinery guard against pathological inputs."""


class InvalidPlan(PlanEthicsError):
    """A plan handed to an evaluator does not execute or does not reach the goal."""


class ConflictingSuggestion(PlanEthicsError):
    """A suggestion directly contradicts one already applied to the model."""


class ValidationFailed(PlanEthicsError):
    """A hypothetical plan is not applicable in the original model."""

    def __init__(self, step_index, reason):
        self.step_index = step_index
        super().__init__(f"hypothetical plan invalid at step {step_index}: {reason}")


class RestoreFailed(PlanEthicsError):
    """A session snapshot could not be loaded; the live store is untouched."""
