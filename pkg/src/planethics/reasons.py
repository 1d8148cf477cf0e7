"""Sufficient and necessary reasons for verdicts via prime implicates.

A sufficient reason is a prime implicant of the verdict's target formula
(the formula itself when permissible, its negation otherwise) all of whose
literals hold in the evaluated plan; a necessary reason is a prime
implicate of the target restricted to the literals that hold. A reason
appearing in both lists is flagged sufficient-and-necessary.

Formulas here are tiny, so implicates are computed by plain resolution
saturation with subsumption, which is easy to check against a brute-force
truth-table oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import formula as fm
from .errors import SizeExceeded
from .ethics import PrincipleFormula, Verdict

MAX_CLAUSES = 10**4

# A literal is (atom, polarity); clauses and terms are frozensets of literals.


def literal_text(literal) -> str:
    atom, polarity = literal
    return str(atom) if polarity else f"¬{atom}"


def _literal_key(literal):
    atom, polarity = literal
    return (str(atom), not polarity)


def sorted_literals(literals):
    return sorted(literals, key=_literal_key)


def clause_text(clause) -> str:
    if not clause:
        return "(false)"
    return "(" + " | ".join(literal_text(l) for l in sorted_literals(clause)) + ")"


def term_text(term) -> str:
    if not term:
        return "(true)"
    return "(" + " & ".join(literal_text(l) for l in sorted_literals(term)) + ")"


def _canonical(clauses):
    return sorted(clauses, key=lambda c: (len(c), [_literal_key(l) for l in sorted_literals(c)]))


def _tautological(clause) -> bool:
    return any((atom, not pol) in clause for atom, pol in clause)


def _formula_of(obj) -> fm.Formula:
    return obj.formula if isinstance(obj, PrincipleFormula) else obj


def to_clausal_form(formula):
    """Exact CNF of an NNF formula by distribution; tautologies dropped."""
    root = fm.to_nnf(_formula_of(formula))

    def cnf(node):
        if isinstance(node, fm.Atom):
            return [frozenset([(node.value, True)])]
        if isinstance(node, fm.Not):
            return [frozenset([(node.child.value, False)])]
        if isinstance(node, fm.And):
            out = []
            for child in node.children:
                out.extend(cnf(child))
                if len(out) > MAX_CLAUSES:
                    raise SizeExceeded(f"CNF exceeds {MAX_CLAUSES} clauses")
            return out
        # Or: distribute — one clause per choice of child clause
        parts = [cnf(child) for child in node.children]
        if len(parts) > 0 and max(len(p) for p in parts) ** len(parts) > MAX_CLAUSES * 10:
            raise SizeExceeded(f"CNF exceeds {MAX_CLAUSES} clauses")
        out = []
        for combo in itertools.product(*parts):
            out.append(frozenset().union(*combo) if combo else frozenset())
            if len(out) > MAX_CLAUSES:
                raise SizeExceeded(f"CNF exceeds {MAX_CLAUSES} clauses")
        return out

    seen = set()
    clauses = []
    for clause in cnf(root):
        if _tautological(clause) or clause in seen:
            continue
        seen.add(clause)
        clauses.append(clause)
    return _canonical(clauses)


def _minimize(clauses):
    """Drop subsumed clauses (keep subset-minimal ones)."""
    out = []
    for clause in sorted(clauses, key=len):
        if not any(kept <= clause for kept in out):
            out.append(clause)
    return set(out)


def _resolvents(c1, c2):
    for atom, pol in c1:
        if (atom, not pol) in c2:
            yield (c1 - {(atom, pol)}) | (c2 - {(atom, not pol)})


def prime_implicates(clauses):
    """All prime implicates of the clause set: resolution closure, subsumption-minimized."""
    current = _minimize(c for c in clauses if not _tautological(c))
    while True:
        fresh = set()
        todo = sorted(current, key=lambda c: (len(c), [_literal_key(l) for l in sorted_literals(c)]))
        for c1, c2 in itertools.combinations(todo, 2):
            for res in _resolvents(c1, c2):
                if _tautological(res):
                    continue
                if any(kept <= res for kept in current) or any(kept <= res for kept in fresh):
                    continue
                fresh.add(res)
        if not fresh:
            break
        current = _minimize(current | fresh)
        if len(current) > MAX_CLAUSES:
            raise SizeExceeded(f"implicate set exceeds {MAX_CLAUSES} clauses")
    return _canonical(current)


def prime_implicants(formula):
    """Prime implicants, computed as dualized prime implicates of the negation."""
    negated = fm.negate(_formula_of(formula))
    implicates = prime_implicates(to_clausal_form(negated))
    terms = [frozenset((atom, not pol) for atom, pol in clause) for clause in implicates]
    return _canonical(terms)


@dataclass(frozen=True)
class Reason:
    literals: frozenset
    kind: str  # "sufficient" | "necessary"
    sufficient_and_necessary: bool = False

    def text(self) -> str:
        return term_text(self.literals) if self.kind == "sufficient" else clause_text(self.literals)

    def atom_names(self):
        """All action/fact names mentioned by this reason's atoms."""
        names = set()
        for atom, _ in self.literals:
            names.update(atom.args)
        return names


@dataclass(frozen=True)
class ReasonSet:
    sufficient: tuple
    necessary: tuple

    def ranked(self):
        """All reasons for display: fewest literals first, then canonical order."""
        pool = list(self.sufficient) + list(self.necessary)
        pool.sort(
            key=lambda r: (
                not r.sufficient_and_necessary,
                len(r.literals),
                [_literal_key(l) for l in sorted_literals(r.literals)],
            )
        )
        return pool


def reasons_for(verdict: Verdict) -> ReasonSet:
    """Extract the verdict's reasons from its formula and assignment.

    The target is the formula itself for a permissible verdict and its
    negation otherwise, so the reasons always support the verdict reached.
    """
    pf = verdict.formula
    target = pf.formula if verdict.permissible else fm.negate(pf.formula)
    assignment = pf.assignment

    def lit_holds(literal):
        atom, polarity = literal
        return assignment[atom] == polarity

    sufficient = [
        term for term in prime_implicants(target) if all(lit_holds(l) for l in term)
    ]

    restricted = []
    for clause in prime_implicates(to_clausal_form(target)):
        live = frozenset(l for l in clause if lit_holds(l))
        if live:
            restricted.append(live)
    necessary = _canonical(_minimize(restricted))

    both = set(sufficient) & set(necessary)
    return ReasonSet(
        sufficient=tuple(
            Reason(t, "sufficient", sufficient_and_necessary=t in both) for t in sufficient
        ),
        necessary=tuple(
            Reason(c, "necessary", sufficient_and_necessary=c in both) for c in necessary
        ),
    )
