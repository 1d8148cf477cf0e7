"""Small propositional formula algebra over hashable atoms.

Formulas are immutable trees of Atom / Not / And / Or. The empty
conjunction is the constant true and the empty disjunction the constant
false. Literals are (atom, polarity) pairs; clauses and terms are
frozensets of literals.
"""

from __future__ import annotations

from dataclasses import dataclass


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    value: object

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Not(Formula):
    child: Formula

    def __str__(self):
        return f"¬{self.child}"


@dataclass(frozen=True)
class And(Formula):
    children: tuple

    def __str__(self):
        if not self.children:
            return "true"
        return "(" + " & ".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True)
class Or(Formula):
    children: tuple

    def __str__(self):
        if not self.children:
            return "false"
        return "(" + " | ".join(str(c) for c in self.children) + ")"


TRUE = And(())
FALSE = Or(())


def atoms(formula: Formula):
    """All atom payloads occurring in the formula."""
    if isinstance(formula, Atom):
        return {formula.value}
    if isinstance(formula, Not):
        return atoms(formula.child)
    out = set()
    for child in formula.children:
        out |= atoms(child)
    return out


def evaluate(formula: Formula, assignment) -> bool:
    if isinstance(formula, Atom):
        return bool(assignment[formula.value])
    if isinstance(formula, Not):
        return not evaluate(formula.child, assignment)
    if isinstance(formula, And):
        return all(evaluate(c, assignment) for c in formula.children)
    if isinstance(formula, Or):
        return any(evaluate(c, assignment) for c in formula.children)
    raise TypeError(f"not a formula: {formula!r}")


def is_nnf(formula: Formula) -> bool:
    """Negations only directly above atoms."""
    if isinstance(formula, Atom):
        return True
    if isinstance(formula, Not):
        return isinstance(formula.child, Atom)
    return all(is_nnf(c) for c in formula.children)


def to_nnf(formula: Formula) -> Formula:
    """Push negations down to the atoms."""
    if isinstance(formula, Atom):
        return formula
    if isinstance(formula, And):
        return And(tuple(to_nnf(c) for c in formula.children))
    if isinstance(formula, Or):
        return Or(tuple(to_nnf(c) for c in formula.children))
    child = formula.child
    if isinstance(child, Atom):
        return formula
    if isinstance(child, Not):
        return to_nnf(child.child)
    if isinstance(child, And):
        return Or(tuple(to_nnf(Not(c)) for c in child.children))
    return And(tuple(to_nnf(Not(c)) for c in child.children))


def negate(formula: Formula) -> Formula:
    return to_nnf(Not(formula))
