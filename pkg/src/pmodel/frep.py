"""F-representations: the five-quality bundle a sentence derivation starts from.

external referents   word -> opaque entity id
lexical referents    formal symbol <-> word, with a category tag
formal declarants    calculus, sorted parameters, scope order, locality notes
formal string        a Formula
force                mood plus optional emphasis target

Quantifier and Wh words bind to the string through the quantified variable:
their lexical referent uses the variable name as its symbol (category Q/WH).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction  # noqa: F401  (re-exported convenience for model files)
from itertools import permutations
from typing import Mapping, Optional

from .errors import PmodelError
from .formal import (
    Exists,
    Forall,
    Formula,
    WhQuery,
    _split_prefix,
    _symbols,
    _wrap_prefix,
    canonicalize,  # noqa: F401  (part of this module's surface)
    parse_formula,
    render_formula,
    well_formed,
)

CALCULI = ("predicate", "probability")
CATEGORIES = ("N", "V", "Q", "WH", "DET", "P")
MOODS = ("declarative", "interrogative")
LOCALITY = ("local", "global")
FREP_VERSION = 1

BindingConstraints = frozenset


@dataclass(frozen=True)
class LexicalReferent:
    symbol: str
    word: str
    category: str

    def __post_init__(self) -> None:
        if self.category not in CATEGORIES:
            raise ValueError(f"bad category: {self.category!r}")
        if not self.symbol or not self.word:
            raise ValueError("lexical referents need a symbol and a word")


@dataclass(frozen=True)
class FormalDeclarants:
    calculus: str
    parameters: tuple[tuple[str, str], ...] = ()  # (variable, sort predicate)
    scope_order: Optional[tuple[str, ...]] = None
    locality: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.calculus not in CALCULI:
            raise ValueError(f"bad calculus: {self.calculus!r}")
        object.__setattr__(self, "parameters", tuple(tuple(p) for p in self.parameters))
        if self.scope_order is not None:
            object.__setattr__(self, "scope_order", tuple(self.scope_order))
        object.__setattr__(self, "locality", dict(self.locality))
        for v in self.locality.values():
            if v not in LOCALITY:
                raise ValueError(f"bad locality: {v!r}")


@dataclass(frozen=True)
class Force:
    mood: str
    emphasis: Optional[str] = None  # a formal symbol with a lexical referent

    def __post_init__(self) -> None:
        if self.mood not in MOODS:
            raise ValueError(f"bad mood: {self.mood!r}")


# ------------------------------------------------------------- diagnostics


@dataclass(frozen=True)
class MissingLexicalReferent:
    symbol: str


@dataclass(frozen=True)
class DanglingExternalReferent:
    word: str


@dataclass(frozen=True)
class DuplicateSymbol:
    symbol: str


@dataclass(frozen=True)
class DuplicateWord:
    word: str


@dataclass(frozen=True)
class IllFormedString:
    diagnostics: tuple[str, ...]


@dataclass(frozen=True)
class EmphasisWithoutReferent:
    symbol: str


@dataclass(frozen=True)
class ScopeOrderUnknownVariable:
    variable: str


@dataclass(frozen=True)
class LocalityUnknownVariable:
    variable: str


class FRepValidationError(PmodelError):
    """Carries the full diagnostic list; an frep is never partially valid."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        super().__init__("; ".join(repr(d) for d in self.diagnostics))


@dataclass(frozen=True)
class FRepresentation:
    external: Mapping[str, int]
    lexical: tuple[LexicalReferent, ...]
    declarants: FormalDeclarants
    string: Formula
    force: Force

    def __post_init__(self) -> None:
        object.__setattr__(self, "external", dict(self.external))
        object.__setattr__(self, "lexical", tuple(self.lexical))

    def word_of(self, symbol: str) -> Optional[str]:
        return next((r.word for r in self.lexical if r.symbol == symbol), None)

    def symbol_of(self, word: str) -> Optional[str]:
        return next((r.symbol for r in self.lexical if r.word == word), None)

    def referent(self, symbol: str) -> Optional[LexicalReferent]:
        return next((r for r in self.lexical if r.symbol == symbol), None)


def quantified_variables(f: Formula) -> tuple[str, ...]:
    """Variables bound anywhere in f, outermost first, duplicates preserved."""
    out: list[str] = []

    def walk(g: Formula) -> None:
        if isinstance(g, (Forall, Exists)):
            out.append(g.variable)
            walk(g.body)
        elif isinstance(g, WhQuery):
            out.append(g.variable)
            walk(g.restrictor)
            walk(g.body)
        elif hasattr(g, "left"):
            walk(g.left)
            walk(g.right)
        elif hasattr(g, "body"):
            walk(g.body)

    walk(f)
    return tuple(out)


def build_frep(external, lexical, declarants, string, force) -> FRepresentation:
    """Validating constructor: returns an FRepresentation or raises
    FRepValidationError carrying every diagnostic found."""
    diagnostics: list = []
    lexical = tuple(lexical)

    seen_symbols: set[str] = set()
    seen_words: set[str] = set()
    for r in lexical:
        if r.symbol in seen_symbols:
            diagnostics.append(DuplicateSymbol(r.symbol))
        if r.word in seen_words:
            diagnostics.append(DuplicateWord(r.word))
        seen_symbols.add(r.symbol)
        seen_words.add(r.word)

    for symbol in sorted(_symbols(string) - seen_symbols):
        diagnostics.append(MissingLexicalReferent(symbol))

    for word in sorted(set(external) - seen_words):
        diagnostics.append(DanglingExternalReferent(word))

    wf = well_formed(string, declarants, known_symbols=seen_symbols)
    if not wf.ok:
        diagnostics.append(IllFormedString(wf.diagnostics))

    if force.emphasis is not None and force.emphasis not in seen_symbols:
        diagnostics.append(EmphasisWithoutReferent(force.emphasis))

    bound = set(quantified_variables(string))
    if declarants.scope_order is not None:
        order = declarants.scope_order
        if len(set(order)) != len(order):
            diagnostics.append(ScopeOrderUnknownVariable(",".join(order)))
        for v in order:
            if v not in bound:
                diagnostics.append(ScopeOrderUnknownVariable(v))
    for v in declarants.locality:
        if v not in bound:
            diagnostics.append(LocalityUnknownVariable(v))

    if diagnostics:
        raise FRepValidationError(diagnostics)
    return FRepresentation(dict(external), lexical, declarants, string, force)


# ------------------------------------------------------------------- scope


def resolve_scope(f: FRepresentation) -> tuple[Formula, ...]:
    """Readings of the string under scope_order.

    Permutes the leading quantifier prefix only. The declared order comes
    first when admissible; the rest follow sorted by their variable sequence.
    """
    prefix, matrix = _split_prefix(f.string)
    if len(prefix) <= 1:
        return (f.string,)
    order = f.declarants.scope_order
    constrained = list(order or ())

    def admissible(p) -> bool:
        listed = [v for _, v in p if v in constrained]
        return listed == constrained

    original = tuple(prefix)
    readings = []
    if admissible(original):
        readings.append(original)
    others = sorted(
        (p for p in permutations(prefix) if p != original and admissible(p)),
        key=lambda p: tuple(v for _, v in p),
    )
    readings.extend(others)
    return tuple(_wrap_prefix(list(p), matrix) for p in readings)


def binding_referents(f: FRepresentation) -> BindingConstraints:
    """The (word, entity id) pairs movement must preserve."""
    return frozenset(f.external.items())


# -------------------------------------------------------------------- JSON


def frep_to_json(f: FRepresentation) -> dict:
    return {
        "frep_version": FREP_VERSION,
        "external": dict(sorted(f.external.items())),
        "lexical": [
            {"symbol": r.symbol, "word": r.word, "category": r.category} for r in f.lexical
        ],
        "declarants": {
            "calculus": f.declarants.calculus,
            "parameters": [list(p) for p in f.declarants.parameters],
            "scope_order": list(f.declarants.scope_order)
            if f.declarants.scope_order is not None
            else None,
            "locality": dict(sorted(f.declarants.locality.items())),
        },
        "string": render_formula(f.string),
        "force": {"mood": f.force.mood, "emphasis": f.force.emphasis},
    }


def frep_from_json(data: Mapping) -> FRepresentation:
    version = data.get("frep_version")
    if version != FREP_VERSION:
        raise FRepValidationError([f"unsupported frep_version: {version!r}"])
    declarants = FormalDeclarants(
        calculus=data["declarants"]["calculus"],
        parameters=tuple(tuple(p) for p in data["declarants"].get("parameters", ())),
        scope_order=(
            tuple(data["declarants"]["scope_order"])
            if data["declarants"].get("scope_order") is not None
            else None
        ),
        locality=data["declarants"].get("locality", {}),
    )
    lexical = tuple(
        LexicalReferent(e["symbol"], e["word"], e["category"]) for e in data.get("lexical", ())
    )
    force = Force(data["force"]["mood"], data["force"].get("emphasis"))
    return build_frep(
        external=data.get("external", {}),
        lexical=lexical,
        declarants=declarants,
        string=parse_formula(data["string"]),
        force=force,
    )


def load_frep(path) -> FRepresentation:
    with open(path, encoding="utf-8") as fh:
        return frep_from_json(json.load(fh))
