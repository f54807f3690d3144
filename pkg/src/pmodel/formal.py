"""Predicate-calculus core: formula AST, concrete syntax, Tarskian evaluation.

Concrete syntax, bit for bit:

    forall x. (x in H -> J S x)     quantifiers prefix, dot-terminated
    exists y. (x S y v y in H)      "v" is disjunction in connective position
    wh x. (x in H , J S x)          query operator: (restrictor , body)
    !(x in H)                       negation
    (p |/ q)                        Sheffer stroke        (p !v q)  Pierce arrow
    prob(snow) = 4/5                exact-rational probability assertion

Rendering parenthesizes every binary connective and nothing else; the
parser additionally accepts redundant grouping parentheses. Terms are
single identifiers: a lowercase letter with optional digits ("x", "y2")
is a variable, anything else is a constant. A lone identifier in formula
position ("p" above) is a propositional atom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple, Optional, Union

from .errors import PmodelError

_VARIABLE_RE = re.compile(r"[a-z][0-9]*\Z")
_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")
_RESERVED = frozenset({"forall", "exists", "wh", "in", "prob", "v"})


class FormulaSyntaxError(PmodelError):
    """Raised on malformed concrete syntax; carries offset and expectations."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"at offset {offset}: {message}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class UninterpretedSymbol(PmodelError):
    def __init__(self, name: str):
        super().__init__(f"symbol {name!r} has no interpretation in the model")
        self.name = name


class UnboundVariable(PmodelError):
    def __init__(self, name: str):
        super().__init__(f"variable {name!r} is not bound by the assignment")
        self.name = name


class UnsupportedNode(PmodelError):
    def __init__(self, kind: str):
        super().__init__(f"operation does not accept {kind} nodes")
        self.kind = kind


class NotCanonicalizable(PmodelError):
    pass


def is_variable_name(name: str) -> bool:
    return bool(_VARIABLE_RE.match(name))


def _check_symbol(name: str, role: str) -> None:
    if not _IDENT_RE.match(name) or name in _RESERVED:
        raise ValueError(f"invalid {role} symbol: {name!r}")


@dataclass(frozen=True)
class Term:
    kind: str  # "constant" | "variable"
    name: str

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "variable"):
            raise ValueError(f"bad term kind: {self.kind!r}")
        if self.kind == "variable":
            if not is_variable_name(self.name):
                raise ValueError(f"variable names look like 'x' or 'y2', got {self.name!r}")
        else:
            _check_symbol(self.name, "constant")
            # keeps parse(render(.)) total: shapes decide variablehood
            if is_variable_name(self.name):
                raise ValueError(f"constant {self.name!r} is shaped like a variable")


def var(name: str) -> Term:
    return Term("variable", name)


def const(name: str) -> Term:
    return Term("constant", name)


@dataclass(frozen=True)
class Atom:
    """A bare propositional letter such as "p"."""

    name: str

    def __post_init__(self) -> None:
        _check_symbol(self.name, "atom")


@dataclass(frozen=True)
class Membership:
    """`x in H` when obj is None, else the relational form `J S x`."""

    subject: Term
    predicate: str
    obj: Optional[Term] = None

    def __post_init__(self) -> None:
        _check_symbol(self.predicate, "relation" if self.obj is not None else "predicate")


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Sheffer:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Pierce:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    variable: str
    body: "Formula"

    def __post_init__(self) -> None:
        if not is_variable_name(self.variable):
            raise ValueError(f"bad quantified variable: {self.variable!r}")


@dataclass(frozen=True)
class Exists:
    variable: str
    body: "Formula"

    def __post_init__(self) -> None:
        if not is_variable_name(self.variable):
            raise ValueError(f"bad quantified variable: {self.variable!r}")


@dataclass(frozen=True)
class WhQuery:
    """A question: which values of `variable` satisfying `restrictor` make `body` true."""

    variable: str
    restrictor: "Formula"
    body: "Formula"

    def __post_init__(self) -> None:
        if not is_variable_name(self.variable):
            raise ValueError(f"bad quantified variable: {self.variable!r}")


@dataclass(frozen=True)
class ProbAssertion:
    event: str
    p: Fraction

    def __post_init__(self) -> None:
        _check_symbol(self.event, "event")
        if not isinstance(self.p, Fraction):
            object.__setattr__(self, "p", Fraction(self.p))
        if not 0 <= self.p <= 1:
            raise ValueError(f"probability {self.p} outside [0, 1]")


Formula = Union[
    Atom, Membership, Not, And, Or, Implies, Sheffer, Pierce, Forall, Exists, WhQuery, ProbAssertion
]

_BINARY = {And: "&", Or: "v", Implies: "->", Sheffer: "|/", Pierce: "!v"}
_GLYPH_TO_BINARY = {g: cls for cls, g in _BINARY.items()}


@dataclass(frozen=True)
class Model:
    """Finite first-order model; domain entities are opaque strings."""

    domain: frozenset[str]
    predicates: Mapping[str, frozenset[str]] = None  # type: ignore[assignment]
    relations: Mapping[str, frozenset[tuple[str, str]]] = None  # type: ignore[assignment]
    constants: Mapping[str, str] = None  # type: ignore[assignment]
    event_probs: Mapping[str, Fraction] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", frozenset(self.domain))
        object.__setattr__(self, "predicates", dict(self.predicates or {}))
        object.__setattr__(self, "relations", dict(self.relations or {}))
        object.__setattr__(self, "constants", dict(self.constants or {}))
        object.__setattr__(
            self, "event_probs", {k: Fraction(v) for k, v in (self.event_probs or {}).items()}
        )
        if not self.domain:
            raise ValueError("model domain must be nonempty")
        for name, ext in self.predicates.items():
            if not set(ext) <= self.domain:
                raise ValueError(f"predicate {name!r} mentions entities outside the domain")
        for name, ext in self.relations.items():
            for a, b in ext:
                if a not in self.domain or b not in self.domain:
                    raise ValueError(f"relation {name!r} mentions entities outside the domain")
        for name, e in self.constants.items():
            if e not in self.domain:
                raise ValueError(f"constant {name!r} denotes {e!r}, not in the domain")
        for name, p in self.event_probs.items():
            if not 0 <= p <= 1:
                raise ValueError(f"event {name!r} has probability {p} outside [0, 1]")


def model_to_json(m: Model) -> dict:
    return {
        "domain": sorted(m.domain),
        "predicates": {k: sorted(v) for k, v in sorted(m.predicates.items())},
        "relations": {k: sorted(list(p) for p in v) for k, v in sorted(m.relations.items())},
        "constants": dict(sorted(m.constants.items())),
        "event_probs": {k: str(v) for k, v in sorted(m.event_probs.items())},
    }


def model_from_json(data: Mapping) -> Model:
    return Model(
        domain=frozenset(data.get("domain", ())),
        predicates={k: frozenset(v) for k, v in data.get("predicates", {}).items()},
        relations={k: frozenset(tuple(p) for p in v) for k, v in data.get("relations", {}).items()},
        constants=dict(data.get("constants", {})),
        event_probs={k: Fraction(v) for k, v in data.get("event_probs", {}).items()},
    )


# ---------------------------------------------------------------- rendering


def render_formula(f: Formula) -> str:
    """Canonical concrete syntax; parse_formula inverts it exactly."""
    match f:
        case Atom(name):
            return name
        case Membership(subject, predicate, None):
            return f"{subject.name} in {predicate}"
        case Membership(subject, predicate, obj):
            return f"{subject.name} {predicate} {obj.name}"
        case Not(body):
            inner = render_formula(body)
            if not isinstance(body, (And, Or, Implies, Sheffer, Pierce)):
                inner = f"({inner})"
            return f"!{inner}"
        case Forall(v, body):
            return f"forall {v}. {render_formula(body)}"
        case Exists(v, body):
            return f"exists {v}. {render_formula(body)}"
        case WhQuery(v, restrictor, body):
            return f"wh {v}. ({render_formula(restrictor)} , {render_formula(body)})"
        case ProbAssertion(event, p):
            return f"prob({event}) = {p.numerator}/{p.denominator}"
        case _:
            glyph = _BINARY[type(f)]
            return f"({render_formula(f.left)} {glyph} {render_formula(f.right)})"


# ------------------------------------------------------------------ lexing


class _Token(NamedTuple):
    kind: str
    text: str
    offset: int


def _lex(text: str) -> Iterator[_Token]:
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "(":
            yield _Token("(", c, i)
        elif c == ")":
            yield _Token(")", c, i)
        elif c == ".":
            yield _Token(".", c, i)
        elif c == ",":
            yield _Token(",", c, i)
        elif c == "=":
            yield _Token("=", c, i)
        elif c == "/":
            yield _Token("/", c, i)
        elif c == "&":
            yield _Token("&", c, i)
        elif text.startswith("->", i):
            yield _Token("->", "->", i)
            i += 2
            continue
        elif text.startswith("|/", i):
            yield _Token("|/", "|/", i)
            i += 2
            continue
        elif c == "!":
            # "!v" glued to a word boundary is the Pierce arrow, bare "!" negation
            if text.startswith("!v", i) and (i + 2 == n or not text[i + 2].isalnum()):
                yield _Token("!v", "!v", i)
                i += 2
                continue
            yield _Token("!", c, i)
        elif c.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            yield _Token("ident", text[i:j], i)
            i = j
            continue
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield _Token("int", text[i:j], i)
            i = j
            continue
        else:
            raise FormulaSyntaxError(f"unexpected character {c!r}", i)
        i += 1
    yield _Token("eof", "", n)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_lex(text))
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise FormulaSyntaxError(f"found {tok.text or 'end of input'!r}", tok.offset, (what,))
        return self.take()

    def term(self) -> Term:
        tok = self.expect("ident", "a term")
        if tok.text in _RESERVED:
            raise FormulaSyntaxError(f"reserved word {tok.text!r}", tok.offset, ("a term",))
        return var(tok.text) if is_variable_name(tok.text) else const(tok.text)

    def symbol(self, role: str) -> str:
        tok = self.expect("ident", f"a {role} symbol")
        if tok.text in _RESERVED:
            raise FormulaSyntaxError(f"reserved word {tok.text!r}", tok.offset, (f"a {role} symbol",))
        return tok.text

    def variable(self) -> str:
        tok = self.expect("ident", "a variable")
        if not is_variable_name(tok.text):
            raise FormulaSyntaxError(f"{tok.text!r} is not a variable", tok.offset, ("a variable",))
        return tok.text

    def formula(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ident" and tok.text in ("forall", "exists"):
            self.take()
            v = self.variable()
            self.expect(".", "'.'")
            body = self.formula()
            return Forall(v, body) if tok.text == "forall" else Exists(v, body)
        if tok.kind == "ident" and tok.text == "wh":
            self.take()
            v = self.variable()
            self.expect(".", "'.'")
            self.expect("(", "'('")
            restrictor = self.formula()
            self.expect(",", "','")
            body = self.formula()
            self.expect(")", "')'")
            return WhQuery(v, restrictor, body)
        if tok.kind == "ident" and tok.text == "prob":
            self.take()
            self.expect("(", "'('")
            event = self.symbol("event")
            self.expect(")", "')'")
            self.expect("=", "'='")
            num = self.expect("int", "a numerator")
            self.expect("/", "'/'")
            den = self.expect("int", "a denominator")
            if int(den.text) == 0:
                raise FormulaSyntaxError("zero denominator", den.offset, ("a positive integer",))
            return ProbAssertion(event, Fraction(int(num.text), int(den.text)))
        if tok.kind == "!":
            self.take()
            return Not(self.formula())
        if tok.kind == "(":
            self.take()
            left = self.formula()
            nxt = self.peek()
            if nxt.kind == ")":
                self.take()
                return left
            op = self.binop()
            right = self.formula()
            self.expect(")", "')'")
            return op(left, right)
        return self.atom()

    def binop(self):
        tok = self.peek()
        if tok.kind in ("&", "->", "|/", "!v"):
            return _GLYPH_TO_BINARY[self.take().text]
        if tok.kind == "ident" and tok.text == "v":
            self.take()
            return Or
        raise FormulaSyntaxError(
            f"found {tok.text or 'end of input'!r}", tok.offset, ("')'", "a connective")
        )

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind != "ident":
            raise FormulaSyntaxError(
                f"found {tok.text or 'end of input'!r}", tok.offset, ("a formula",)
            )
        subject = self.term()
        nxt = self.peek()
        if nxt.kind == "ident" and nxt.text == "in":
            self.take()
            return Membership(subject, self.symbol("predicate"))
        if nxt.kind == "ident" and nxt.text not in _RESERVED:
            relation = self.symbol("relation")
            return Membership(subject, relation, self.term())
        return Atom(subject.name)


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    f = parser.formula()
    tail = parser.peek()
    if tail.kind != "eof":
        raise FormulaSyntaxError(f"trailing input {tail.text!r}", tail.offset, ("end of input",))
    return f


# ------------------------------------------------------------------ JSON


def formula_to_json(f: Formula) -> dict:
    match f:
        case Atom(name):
            return {"node": "atom", "name": name}
        case Membership(subject, predicate, obj):
            return {
                "node": "membership",
                "subject": {"kind": subject.kind, "name": subject.name},
                "predicate": predicate,
                "object": None if obj is None else {"kind": obj.kind, "name": obj.name},
            }
        case Not(body):
            return {"node": "not", "body": formula_to_json(body)}
        case Forall(v, body):
            return {"node": "forall", "variable": v, "body": formula_to_json(body)}
        case Exists(v, body):
            return {"node": "exists", "variable": v, "body": formula_to_json(body)}
        case WhQuery(v, restrictor, body):
            return {
                "node": "wh",
                "variable": v,
                "restrictor": formula_to_json(restrictor),
                "body": formula_to_json(body),
            }
        case ProbAssertion(event, p):
            return {"node": "prob", "event": event, "p": f"{p.numerator}/{p.denominator}"}
        case _:
            tag = {And: "and", Or: "or", Implies: "implies", Sheffer: "sheffer", Pierce: "pierce"}
            return {
                "node": tag[type(f)],
                "left": formula_to_json(f.left),
                "right": formula_to_json(f.right),
            }


def formula_from_json(data: Mapping) -> Formula:
    node = data["node"]
    if node == "atom":
        return Atom(data["name"])
    if node == "membership":
        subj = Term(data["subject"]["kind"], data["subject"]["name"])
        obj = data.get("object")
        return Membership(subj, data["predicate"], Term(obj["kind"], obj["name"]) if obj else None)
    if node == "not":
        return Not(formula_from_json(data["body"]))
    if node == "forall":
        return Forall(data["variable"], formula_from_json(data["body"]))
    if node == "exists":
        return Exists(data["variable"], formula_from_json(data["body"]))
    if node == "wh":
        return WhQuery(
            data["variable"],
            formula_from_json(data["restrictor"]),
            formula_from_json(data["body"]),
        )
    if node == "prob":
        return ProbAssertion(data["event"], Fraction(data["p"]))
    cls = {"and": And, "or": Or, "implies": Implies, "sheffer": Sheffer, "pierce": Pierce}[node]
    return cls(formula_from_json(data["left"]), formula_from_json(data["right"]))


# -------------------------------------------------------------- evaluation


def _entity(t: Term, m: Model, assignment: Mapping[str, str]) -> str:
    if t.kind == "variable":
        try:
            return assignment[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    try:
        return m.constants[t.name]
    except KeyError:
        raise UninterpretedSymbol(t.name) from None


def evaluate(f: Formula, m: Model, assignment: Optional[Mapping[str, str]] = None) -> bool:
    """Tarskian truth in a finite model.

    Quantifiers range over m.domain. A WhQuery is read as answerability:
    true iff some domain element satisfies restrictor and body together.
    Probability assertions are exact comparisons against the model's event
    map. Propositional atoms read their truth value from the assignment.
    """
    a = dict(assignment or {})
    match f:
        case Atom(name):
            if name in a:
                return bool(a[name])
            raise UninterpretedSymbol(name)
        case Membership(subject, predicate, None):
            e = _entity(subject, m, a)
            if predicate not in m.predicates:
                raise UninterpretedSymbol(predicate)
            return e in m.predicates[predicate]
        case Membership(subject, predicate, obj):
            pair = (_entity(subject, m, a), _entity(obj, m, a))
            if predicate not in m.relations:
                raise UninterpretedSymbol(predicate)
            return pair in m.relations[predicate]
        case Not(body):
            return not evaluate(body, m, a)
        case And(left, right):
            return evaluate(left, m, a) and evaluate(right, m, a)
        case Or(left, right):
            return evaluate(left, m, a) or evaluate(right, m, a)
        case Implies(left, right):
            return (not evaluate(left, m, a)) or evaluate(right, m, a)
        case Sheffer(left, right):
            return not (evaluate(left, m, a) and evaluate(right, m, a))
        case Pierce(left, right):
            return not (evaluate(left, m, a) or evaluate(right, m, a))
        case Forall(v, body):
            return all(evaluate(body, m, {**a, v: e}) for e in sorted(m.domain))
        case Exists(v, body):
            return any(evaluate(body, m, {**a, v: e}) for e in sorted(m.domain))
        case WhQuery(v, restrictor, body):
            return any(
                evaluate(restrictor, m, {**a, v: e}) and evaluate(body, m, {**a, v: e})
                for e in sorted(m.domain)
            )
        case ProbAssertion(event, p):
            if event not in m.event_probs:
                raise UninterpretedSymbol(event)
            return m.event_probs[event] == p
    raise UnsupportedNode(type(f).__name__)


# ------------------------------------------------------------ free variables


def free_vars(f: Formula) -> frozenset[str]:
    match f:
        case Membership(subject, _, obj):
            names = {t.name for t in (subject, obj) if t is not None and t.kind == "variable"}
            return frozenset(names)
        case Not(body):
            return free_vars(body)
        case Forall(v, body) | Exists(v, body):
            return free_vars(body) - {v}
        case WhQuery(v, restrictor, body):
            return (free_vars(restrictor) | free_vars(body)) - {v}
        case Atom() | ProbAssertion():
            return frozenset()
        case _:
            return free_vars(f.left) | free_vars(f.right)


def _symbols(f: Formula) -> frozenset[str]:
    """Every predicate, relation, constant, atom and event symbol in f."""
    match f:
        case Atom(name):
            return frozenset({name})
        case Membership(subject, predicate, obj):
            names = {predicate}
            for t in (subject, obj):
                if t is not None and t.kind == "constant":
                    names.add(t.name)
            return frozenset(names)
        case Not(body):
            return _symbols(body)
        case Forall(_, body) | Exists(_, body):
            return _symbols(body)
        case WhQuery(_, restrictor, body):
            return _symbols(restrictor) | _symbols(body)
        case ProbAssertion(event, _):
            return frozenset({event})
        case _:
            return _symbols(f.left) | _symbols(f.right)


def _quantifier_nodes(f: Formula) -> Iterator[Formula]:
    match f:
        case Forall(_, body) | Exists(_, body):
            yield f
            yield from _quantifier_nodes(body)
        case WhQuery(_, restrictor, body):
            yield f
            yield from _quantifier_nodes(restrictor)
            yield from _quantifier_nodes(body)
        case Not(body):
            yield from _quantifier_nodes(body)
        case Atom() | Membership() | ProbAssertion():
            return
        case _:
            yield from _quantifier_nodes(f.left)
            yield from _quantifier_nodes(f.right)


class WellFormedness(NamedTuple):
    ok: bool
    diagnostics: tuple[str, ...]


def _shadowing(f: Formula, bound: frozenset[str]) -> list[str]:
    match f:
        case Forall(v, body) | Exists(v, body):
            out = [f"Shadowing: {v} rebound"] if v in bound else []
            return out + _shadowing(body, bound | {v})
        case WhQuery(v, restrictor, body):
            out = [f"Shadowing: {v} rebound"] if v in bound else []
            inner = bound | {v}
            return out + _shadowing(restrictor, inner) + _shadowing(body, inner)
        case Not(body):
            return _shadowing(body, bound)
        case Atom() | Membership() | ProbAssertion():
            return []
        case _:
            return _shadowing(f.left, bound) + _shadowing(f.right, bound)


def well_formed(f: Formula, declarants=None, known_symbols=None) -> WellFormedness:
    """Well-formedness against a declaration context.

    `declarants` needs `.calculus` and `.parameters` (pairs of variable, sort
    predicate); `known_symbols` optionally closes the symbol vocabulary.
    Returns ok plus the full diagnostic list.
    """
    diagnostics: list[str] = []
    diagnostics.extend(_shadowing(f, frozenset()))

    declared_vars: set[str] = set()
    sort_predicates: set[str] = set()
    calculus = getattr(declarants, "calculus", None)
    for v, sort in getattr(declarants, "parameters", ()) or ():
        declared_vars.add(v)
        sort_predicates.add(sort)

    if declarants is not None:
        for name in sorted(free_vars(f) - declared_vars):
            diagnostics.append(f"UndeclaredVariable: {name}")

    if known_symbols is not None:
        allowed = set(known_symbols) | sort_predicates
        for name in sorted(_symbols(f) - allowed):
            diagnostics.append(f"UnknownSymbol: {name}")

    has_prob = any(isinstance(g, ProbAssertion) for g in _walk(f))
    has_quantifier = next(_quantifier_nodes(f), None) is not None
    if calculus == "predicate" and has_prob:
        diagnostics.append("CalculusMismatch: probability assertion under predicate calculus")
    if calculus == "propositional" and (has_quantifier or has_prob):
        diagnostics.append("CalculusMismatch: quantification under propositional calculus")

    return WellFormedness(not diagnostics, tuple(diagnostics))


def _walk(f: Formula) -> Iterator[Formula]:
    yield f
    match f:
        case Not(body) | Forall(_, body) | Exists(_, body):
            yield from _walk(body)
        case WhQuery(_, restrictor, body):
            yield from _walk(restrictor)
            yield from _walk(body)
        case Atom() | Membership() | ProbAssertion():
            return
        case _:
            yield from _walk(f.left)
            yield from _walk(f.right)


# ------------------------------------------------------------ Sheffer basis


def to_sheffer(f: Formula) -> Formula:
    """Rewrite {not, and, or, implies} into the Sheffer stroke alone.

    Quantifier structure and atoms pass through untouched; Pierce input is
    rejected (its dual expansion is not part of this rewriting system).
    """
    match f:
        case Atom() | Membership() | ProbAssertion():
            return f
        case Not(body):
            inner = to_sheffer(body)
            return Sheffer(inner, inner)
        case And(left, right):
            once = Sheffer(to_sheffer(left), to_sheffer(right))
            return Sheffer(once, once)
        case Or(left, right):
            a, b = to_sheffer(left), to_sheffer(right)
            return Sheffer(Sheffer(a, a), Sheffer(b, b))
        case Implies(left, right):
            a, b = to_sheffer(left), to_sheffer(right)
            return Sheffer(a, Sheffer(b, b))
        case Sheffer(left, right):
            return Sheffer(to_sheffer(left), to_sheffer(right))
        case Forall(v, body):
            return Forall(v, to_sheffer(body))
        case Exists(v, body):
            return Exists(v, to_sheffer(body))
        case WhQuery(v, restrictor, body):
            return WhQuery(v, to_sheffer(restrictor), to_sheffer(body))
        case Pierce():
            raise UnsupportedNode("Pierce")
    raise UnsupportedNode(type(f).__name__)


# ----------------------------------------------------------- canonical form


def _split_prefix(f: Formula) -> tuple[list[tuple[type, str]], Formula]:
    prefix: list[tuple[type, str]] = []
    while isinstance(f, (Forall, Exists)):
        prefix.append((type(f), f.variable))
        f = f.body
    return prefix, f


def _wrap_prefix(prefix: list[tuple[type, str]], body: Formula) -> Formula:
    for cls, v in reversed(prefix):
        body = cls(v, body)
    return body


def canonicalize(f: Formula) -> Formula:
    """Pull quantifiers into prenex-leading position, outermost first.

    Movement never changes a quantifier's type: a quantifier trapped under
    negation, a Sheffer/Pierce stroke, or an implication antecedent raises
    NotCanonicalizable, as do moves that would capture variables or stack
    two binders of the same name. Idempotent, and equivalence-preserving on
    every (nonempty-domain) finite model.
    """
    match f:
        case Atom() | Membership() | ProbAssertion():
            return f
        case Forall(v, body):
            return Forall(v, canonicalize(body))
        case Exists(v, body):
            return Exists(v, canonicalize(body))
        case WhQuery(v, restrictor, body):
            return WhQuery(v, canonicalize(restrictor), canonicalize(body))
        case Not(body):
            inner = canonicalize(body)
            if isinstance(inner, (Forall, Exists, WhQuery)):
                raise NotCanonicalizable("a quantifier cannot move out of a negation")
            return Not(inner)
        case Sheffer(left, right) | Pierce(left, right):
            a, b = canonicalize(left), canonicalize(right)
            if any(isinstance(g, (Forall, Exists, WhQuery)) for g in (a, b)):
                raise NotCanonicalizable("a quantifier cannot move across a stroke connective")
            return type(f)(a, b)
        case And(left, right) | Or(left, right):
            a, b = canonicalize(left), canonicalize(right)
            if isinstance(a, WhQuery) or isinstance(b, WhQuery):
                raise NotCanonicalizable("a query cannot move out of a connective")
            pa, abody = _split_prefix(a)
            pb, bbody = _split_prefix(b)
            _check_moves(pa, b, "right operand")
            _check_moves(pb, abody, "left operand")
            seen = [v for _, v in pa + pb]
            if len(seen) != len(set(seen)):
                raise NotCanonicalizable("same variable bound on both sides")
            return _wrap_prefix(pa + pb, type(f)(abody, bbody))
        case Implies(left, right):
            a, b = canonicalize(left), canonicalize(right)
            if isinstance(a, (Forall, Exists, WhQuery)):
                raise NotCanonicalizable("a quantifier cannot move out of an antecedent")
            if isinstance(b, WhQuery):
                raise NotCanonicalizable("a query cannot move out of a connective")
            pb, bbody = _split_prefix(b)
            _check_moves(pb, a, "antecedent")
            return _wrap_prefix(pb, Implies(a, bbody))
    raise UnsupportedNode(type(f).__name__)


def _check_moves(prefix: list[tuple[type, str]], other: Formula, where: str) -> None:
    captured = {v for _, v in prefix} & free_vars(other)
    if captured:
        names = ", ".join(sorted(captured))
        raise NotCanonicalizable(f"moving {names} would capture a free variable in the {where}")
