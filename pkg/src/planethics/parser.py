"""Parse the textual domain/problem dialect into a PlanningModel and back.

Domain files::

    (define (domain NAME)
      (:facts f1 f2 ...)
      (:action NAME :pre (f ...) :add (f ...) :del (f ...) :cost INT :intrinsic KW)
      ...)

Problem files::

    (define (problem NAME)
      (:domain NAME)
      (:init (f ...))
      (:goal (f ...))
      (:utility (f INT) ...)
      (:display (name "phrase") ...))

Comments run from `;;` to end of line. Hypothetical models serialize their
provenance as `;; provenance: <suggestion id>` header comments on the domain
document, and the parser restores them, so parse(serialize(m)) == m holds for
HModels too.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ModelSemanticError, ModelSyntaxError
from .model import Action, IntrinsicValue, PlanningModel

_SYMBOL_RE = re.compile(r"[A-Za-z_:][A-Za-z0-9_:-]*")
_INT_RE = re.compile(r"-?[0-9]+")
_PROVENANCE_RE = re.compile(r"^;;\s*provenance:\s*(.+?)\s*$")


@dataclass(frozen=True)
class SourceDocument:
    """Raw text plus where it came from, for diagnostics."""

    text: str
    origin: str = "<inline>"


def _as_document(doc, default_origin) -> SourceDocument:
    if isinstance(doc, SourceDocument):
        return doc
    return SourceDocument(text=doc, origin=default_origin)


@dataclass(frozen=True)
class _Token:
    kind: str  # "(", ")", "sym", "int", "str", "eof"
    value: object
    line: int
    col: int


def _tokenize(doc: SourceDocument):
    tokens = []
    line, col = 1, 1
    text = doc.text
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == ";":
            if i + 1 < n and text[i + 1] == ";":
                while i < n and text[i] != "\n":
                    i += 1
                continue
            raise ModelSyntaxError("expected ';;' to start a comment", line, col)
        if ch in "()":
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf = []
            while i < n and text[i] != '"':
                if text[i] == "\n":
                    raise ModelSyntaxError("unterminated string", start_line, start_col)
                if text[i] == "\\" and i + 1 < n:
                    buf.append(text[i + 1])
                    i += 2
                    col += 2
                    continue
                buf.append(text[i])
                i += 1
                col += 1
            if i >= n:
                raise ModelSyntaxError("unterminated string", start_line, start_col)
            i += 1
            col += 1
            tokens.append(_Token("str", "".join(buf), start_line, start_col))
            continue
        m = _INT_RE.match(text, i)
        if m and (ch.isdigit() or ch == "-"):
            tokens.append(_Token("int", int(m.group()), line, col))
            col += m.end() - i
            i = m.end()
            continue
        m = _SYMBOL_RE.match(text, i)
        if m:
            tokens.append(_Token("sym", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        raise ModelSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", None, line, col))
    return tokens


class _Reader:
    def __init__(self, doc: SourceDocument):
        self.doc = doc
        self.tokens = _tokenize(doc)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, expected, tok=None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise ModelSyntaxError(
            f"{self.doc.origin}: expected {expected}, found {found}", tok.line, tok.col
        )

    def expect(self, kind, value=None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            self.error(value if value is not None else kind)
        return self.next()

    def expect_symbol(self) -> _Token:
        tok = self.peek()
        if tok.kind != "sym" or tok.value.startswith(":"):
            self.error("a name")
        return self.next()

    def expect_end(self):
        tok = self.peek()
        if tok.kind != "eof":
            self.error("end of input")

    def name_list(self):
        """Parse `(name name ...)` into an ordered list."""
        self.expect("(")
        names = []
        while self.peek().kind != ")":
            names.append(self.expect_symbol().value)
        self.expect(")")
        return names


def _parse_domain(doc: SourceDocument):
    provenance = [
        m.group(1)
        for m in (_PROVENANCE_RE.match(ln) for ln in doc.text.splitlines())
        if m
    ]
    r = _Reader(doc)
    r.expect("(")
    r.expect("sym", "define")
    r.expect("(")
    r.expect("sym", "domain")
    name = r.expect_symbol().value
    r.expect(")")

    facts = None
    actions = []
    while r.peek().kind == "(":
        r.next()
        head = r.expect("sym")
        if head.value == ":facts":
            if facts is not None:
                r.error("a single :facts block", head)
            facts = []
            while r.peek().kind != ")":
                facts.append(r.expect_symbol().value)
            r.expect(")")
        elif head.value == ":action":
            actions.append(_parse_action(r))
        else:
            r.error(":facts or :action", head)
    r.expect(")")
    r.expect_end()
    return name, facts or [], actions, provenance


def _parse_action(r: _Reader) -> Action:
    name_tok = r.expect_symbol()
    fields = {"pre": [], "add": [], "del": [], "cost": 1, "intrinsic": IntrinsicValue.NEUTRAL}
    seen = set()
    while r.peek().kind != ")":
        kw = r.expect("sym")
        if not kw.value.startswith(":"):
            r.error("an action keyword", kw)
        key = kw.value[1:]
        if kw.value not in (":pre", ":add", ":del", ":cost", ":intrinsic"):
            r.error(":pre, :add, :del, :cost or :intrinsic", kw)
        if key in seen:
            r.error(f"{kw.value} to appear once", kw)
        seen.add(key)
        if key in ("pre", "add", "del"):
            fields[key] = r.name_list()
        elif key == "cost":
            tok = r.peek()
            if tok.kind != "int":
                r.error("an integer cost")
            if tok.value < 0:
                raise ModelSemanticError(
                    f"action {name_tok.value}: cost must be non-negative, got {tok.value}"
                )
            fields["cost"] = r.next().value
        else:
            tok = r.expect("sym")
            try:
                fields["intrinsic"] = IntrinsicValue(tok.value)
            except ValueError:
                r.error("good, neutral or bad", tok)
    r.expect(")")
    return Action(
        name=name_tok.value,
        preconditions=frozenset(fields["pre"]),
        add_effects=frozenset(fields["add"]),
        del_effects=frozenset(fields["del"]),
        cost=fields["cost"],
        intrinsic=fields["intrinsic"],
    )


def _parse_problem(doc: SourceDocument):
    r = _Reader(doc)
    r.expect("(")
    r.expect("sym", "define")
    r.expect("(")
    r.expect("sym", "problem")
    r.expect_symbol()
    r.expect(")")

    blocks = {}
    while r.peek().kind == "(":
        r.next()
        head = r.expect("sym")
        key = head.value
        if key not in (":domain", ":init", ":goal", ":utility", ":display"):
            r.error(":domain, :init, :goal, :utility or :display", head)
        if key in blocks:
            r.error(f"a single {key} block", head)
        if key == ":domain":
            blocks[key] = r.expect_symbol().value
            r.expect(")")
        elif key in (":init", ":goal"):
            blocks[key] = r.name_list()
            r.expect(")")
        elif key == ":utility":
            entries = []
            while r.peek().kind == "(":
                r.next()
                fact = r.expect_symbol().value
                tok = r.peek()
                if tok.kind != "int":
                    r.error("an integer utility")
                entries.append((fact, r.next().value))
                r.expect(")")
            r.expect(")")
            blocks[key] = entries
        else:  # :display
            entries = []
            while r.peek().kind == "(":
                r.next()
                name = r.expect_symbol().value
                tok = r.peek()
                if tok.kind != "str":
                    r.error("a quoted display phrase")
                entries.append((name, r.next().value))
                r.expect(")")
            r.expect(")")
            blocks[key] = entries
    r.expect(")")
    r.expect_end()

    for required in (":domain", ":init", ":goal"):
        if required not in blocks:
            raise ModelSyntaxError(f"{doc.origin}: missing {required} block", 1, 1)
    return blocks


def parse_model(domain_doc, problem_doc) -> PlanningModel:
    """Parse a domain/problem document pair into a validated PlanningModel."""
    domain_doc = _as_document(domain_doc, "<domain>")
    problem_doc = _as_document(problem_doc, "<problem>")

    name, fact_list, actions, provenance = _parse_domain(domain_doc)
    blocks = _parse_problem(problem_doc)

    if blocks[":domain"] != name:
        raise ModelSemanticError(
            f"problem targets domain {blocks[':domain']!r}, document defines {name!r}"
        )
    dupes = sorted({f for f in fact_list if fact_list.count(f) > 1})
    if dupes:
        raise ModelSemanticError(f"duplicate fact declarations: {dupes}")
    facts = frozenset(fact_list)

    names = [a.name for a in actions]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ModelSemanticError(f"duplicate action declarations: {dupes}")
    for action in actions:
        loose = action.mentioned_facts() - facts
        if loose:
            raise ModelSemanticError(
                f"action {action.name} references undeclared facts: {sorted(loose)}"
            )

    def checked(kind, names):
        loose = sorted(set(names) - facts)
        if loose:
            raise ModelSemanticError(f"{kind} references undeclared facts: {loose}")
        return frozenset(names)

    init = checked("init", blocks[":init"])
    goal = checked("goal", blocks[":goal"])

    utility = {}
    for fact, value in blocks.get(":utility", []):
        if fact not in facts:
            raise ModelSemanticError(f"utility entry for undeclared fact: {fact}")
        if fact in utility:
            raise ModelSemanticError(f"duplicate utility entry: {fact}")
        utility[fact] = value

    known = facts | set(names)
    display = {}
    for target, phrase in blocks.get(":display", []):
        if target not in known:
            raise ModelSemanticError(f"display entry for unknown name: {target}")
        if target in display:
            raise ModelSemanticError(f"duplicate display entry: {target}")
        display[target] = phrase

    return PlanningModel(
        name=name,
        facts=facts,
        actions=tuple(actions),
        init=init,
        goal=goal,
        utility=utility,
        display=display,
        provenance=tuple(provenance),
    )


def _quote(phrase: str) -> str:
    return '"' + phrase.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _fact_list(names) -> str:
    return "(" + " ".join(sorted(names)) + ")"


def serialize_model(model: PlanningModel):
    """Render the model back to a canonical (domain, problem) document pair.

    The output is deterministic (sorted facts, actions and entries), so it is
    usable both for golden tests and for handing HModels to an external
    planner. parse_model(*serialize_model(m)) is structurally equal to m.
    """
    lines = [f";; provenance: {sid}" for sid in model.provenance]
    lines.append(f"(define (domain {model.name})")
    lines.append(f"  (:facts {' '.join(sorted(model.facts))})")
    for action in model.actions:  # already sorted by name
        lines.append(
            f"  (:action {action.name}"
            f" :pre {_fact_list(action.preconditions)}"
            f" :add {_fact_list(action.add_effects)}"
            f" :del {_fact_list(action.del_effects)}"
            f" :cost {action.cost}"
            f" :intrinsic {action.intrinsic.value})"
        )
    domain_text = "\n".join(lines) + ")\n"

    plines = [f"(define (problem {model.name}_problem)"]
    plines.append(f"  (:domain {model.name})")
    plines.append(f"  (:init {_fact_list(model.init)})")
    plines.append(f"  (:goal {_fact_list(model.goal)})")
    if model.utility:
        entries = " ".join(f"({f} {v})" for f, v in sorted(model.utility.items()))
        plines.append(f"  (:utility {entries})")
    if model.display:
        entries = " ".join(f"({n} {_quote(p)})" for n, p in sorted(model.display.items()))
        plines.append(f"  (:display {entries})")
    problem_text = "\n".join(plines) + ")\n"

    return (
        SourceDocument(text=domain_text, origin="<serialized domain>"),
        SourceDocument(text=problem_text, origin="<serialized problem>"),
    )
