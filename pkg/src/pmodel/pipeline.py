"""The two derivation pipelines and their agreement check.

T direction: a deep structure is realized (apply_emphasis) and then raised
to logical form. P direction: a logical form is spelled straight out of the
F-representation and lowered to deep structure, so surface structure is the
last step and no logical-form level exists downstream. compare() runs both
from the same F-representation and checks that the T pipeline's recovered
logical form matches the canonicalized formal string and that both sides
report identical DS -> SS movement.

Lexicalization is deterministic: quantifier prefixes become fronted indexed
words, the matrix becomes subject-verb-object order, sort guards vanish into
the quantifier words, and interrogatives with a non-subject Wh get
do-support "did" (realization only; it has no formal symbol).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import PmodelError
from .formal import (
    And,
    Exists,
    Forall,
    Formula,
    Implies,
    Membership,
    NotCanonicalizable,
    Term,
    WhQuery,
    canonicalize,
    is_variable_name,
    render_formula,
    var,
)
from .frep import Force, FRepresentation, binding_referents, resolve_scope
from .movement import (
    DEFAULT_CONFIG,
    GrammarConfig,
    MovementRecord,
    apply_emphasis,
    quantifier_lower,
    quantifier_raise,
    record_to_json,
    wh_lower,
    wh_raise,
)
from .sstring import Indexed, OpenBracket, CloseBracket, SString, Trace, Word, render, strip


class DerivationError(PmodelError):
    pass


class UnlexicalizableNode(DerivationError):
    def __init__(self, kind: str):
        super().__init__(f"cannot spell out {kind}")
        self.kind = kind


class ReadingNotAvailable(DerivationError):
    pass


class DelexicalizeFailure(DerivationError):
    pass


@dataclass(frozen=True)
class DerivationStep:
    sstring: SString
    movements: tuple[MovementRecord, ...] = ()


@dataclass(frozen=True)
class Derivation:
    model: str  # "T" | "P"
    steps: tuple[DerivationStep, ...]
    warnings: tuple[str, ...] = ()
    frep: Optional[FRepresentation] = None

    def __post_init__(self) -> None:
        expected = ("DS", "SS", "LF") if self.model == "T" else ("DS", "SS")
        levels = tuple(st.sstring.level for st in self.steps)
        if self.model not in ("T", "P") or levels != expected:
            raise ValueError(f"bad level sequence for {self.model}: {levels}")


def config_for(f: FRepresentation, base: GrammarConfig = DEFAULT_CONFIG) -> GrammarConfig:
    """Extend a grammar config with the frep's own quantifier and Wh words."""
    return GrammarConfig(
        quantifier_words=base.quantifier_words
        | {r.word.lower() for r in f.lexical if r.category == "Q"},
        wh_words=base.wh_words | {r.word.lower() for r in f.lexical if r.category == "WH"},
        wh_fronting=base.wh_fronting,
        quantifiers_land_last=base.quantifiers_land_last,
    )


def _split_reading(reading: Formula):
    """Leading quantifier prefix as (kind, variable, restrictor) triples."""
    prefix = []
    while True:
        if isinstance(reading, Forall):
            prefix.append(("forall", reading.variable, None))
            reading = reading.body
        elif isinstance(reading, Exists):
            prefix.append(("exists", reading.variable, None))
            reading = reading.body
        elif isinstance(reading, WhQuery):
            prefix.append(("wh", reading.variable, reading.restrictor))
            reading = reading.body
        else:
            return prefix, reading


def _conjuncts(f: Formula) -> list[Formula]:
    return _conjuncts(f.left) + _conjuncts(f.right) if isinstance(f, And) else [f]


def _strip_guard(matrix: Formula, prefix, sorts) -> Formula:
    """Drop a sort-guard antecedent: it is carried by the quantifier words."""
    if not isinstance(matrix, Implies):
        return matrix
    prefix_vars = {v for _, v, _ in prefix}
    for g in _conjuncts(matrix.left):
        if not (
            isinstance(g, Membership)
            and g.obj is None
            and g.subject.kind == "variable"
            and g.subject.name in prefix_vars
            and sorts.get(g.subject.name) == g.predicate
        ):
            return matrix
    return matrix.right


def _word_for(f: FRepresentation, symbol: str) -> str:
    word = f.word_of(symbol)
    if word is None:
        raise UnlexicalizableNode(f"symbol {symbol!r} without a lexical referent")
    return word


def _lexicalize(f: FRepresentation, reading: Formula) -> SString:
    """Spell the reading out as a flat logical-form string."""
    prefix, matrix = _split_reading(reading)
    if not prefix and isinstance(reading, WhQuery):
        raise UnlexicalizableNode("WhQuery")  # unreachable, kept for clarity
    sorts = dict(f.declarants.parameters)
    matrix = _strip_guard(matrix, prefix, sorts)
    if not isinstance(matrix, Membership):
        raise UnlexicalizableNode(type(matrix).__name__)

    index_of = {v: i + 1 for i, (_, v, _) in enumerate(prefix)}

    def term_item(t: Term):
        if t.kind == "variable":
            if t.name not in index_of:
                raise UnlexicalizableNode(f"free variable {t.name!r}")
            return Trace("x", index_of[t.name])
        return Word(_word_for(f, t.name))

    verb = Word(_word_for(f, matrix.predicate))
    if matrix.obj is None:
        body = [term_item(matrix.subject), verb]
    else:
        body = [term_item(matrix.subject), verb, term_item(matrix.obj)]

    wh_vars = {v for kind, v, _ in prefix if kind == "wh"}
    subject_is_wh = (
        matrix.subject.kind == "variable" and matrix.subject.name in wh_vars
    )
    if f.force.mood == "interrogative" and wh_vars and not subject_is_wh:
        body.insert(0, Word("did"))

    fronted = []
    for _, v, _ in prefix:
        referent = f.referent(v)
        if referent is None or referent.category not in ("Q", "WH"):
            raise UnlexicalizableNode(f"quantifier variable {v!r} without a Q/WH referent")
        fronted.append(Indexed(referent.word, index_of[v]))

    items = fronted + body
    punctuation = "question" if f.force.mood == "interrogative" else None
    return SString("LF", tuple(items), punctuation)


def _relabel(s: SString, level: str) -> SString:
    return SString(level, s.items, s.punctuation)


def _lower_all(lf: SString, config: GrammarConfig) -> tuple[SString, list[MovementRecord]]:
    s, records = lf, []
    while True:
        audible = [it for it in s.items if isinstance(it, (Word, Indexed))]
        if not audible or not isinstance(audible[0], Indexed):
            break
        head = audible[0]
        partner = next(
            (it for it in s.items if isinstance(it, Trace) and it.index == head.index), None
        )
        if partner is None or partner.kind != "x":
            break
        text = head.text.lower()
        if text in config.wh_words:
            s, record = wh_lower(_relabel(s, "LF"), config)
        elif text in config.quantifier_words:
            s, record = quantifier_lower(_relabel(s, "LF"), config)
        else:
            break
        records.append(record)
    return _relabel(s, "DS"), records


def generate_ds(
    f: FRepresentation, reading: Formula, config: Optional[GrammarConfig] = None
) -> SString:
    """Deterministic lexicalization of one scope reading down to deep structure."""
    cfg = config_for(f, config or DEFAULT_CONFIG)
    if reading not in resolve_scope(f):
        raise ReadingNotAvailable(render_formula(reading))
    ds, _ = _lower_all(_lexicalize(f, reading), cfg)
    return ds


def _resolved_force(f: FRepresentation) -> Force:
    """Movement matches surface words; swap the emphasis symbol for its word."""
    if f.force.emphasis is None:
        return f.force
    return Force(f.force.mood, f.word_of(f.force.emphasis))


def derive_p(
    f: FRepresentation,
    reading: Optional[Formula] = None,
    config: Optional[GrammarConfig] = None,
) -> Derivation:
    """F-representation -> DS -> SS. Ambiguity is resolved to the first
    reading and flagged in warnings."""
    cfg = config_for(f, config or DEFAULT_CONFIG)
    readings = resolve_scope(f)
    warnings: tuple[str, ...] = ()
    if reading is None:
        reading = readings[0]
        if len(readings) > 1:
            warnings = (f"scope-ambiguous: derived reading 1 of {len(readings)}",)
    elif reading not in readings:
        raise ReadingNotAvailable(render_formula(reading))
    lf = _lexicalize(f, reading)
    ds, lower_records = _lower_all(lf, cfg)
    ss, emphasis_record = apply_emphasis(ds, _resolved_force(f), binding_referents(f), cfg)
    steps = (
        DerivationStep(ds, tuple(lower_records)),
        DerivationStep(ss, (emphasis_record,) if emphasis_record else ()),
    )
    return Derivation("P", steps, warnings, frep=f)


def _retype_t_traces(s: SString) -> SString:
    items = tuple(
        Trace("x", it.index) if isinstance(it, Trace) and it.kind == "t" else it for it in s.items
    )
    return SString("LF", items, s.punctuation)


def derive_t(
    ds: SString,
    force: Force,
    config: GrammarConfig = DEFAULT_CONFIG,
    raise_order: Optional[tuple[str, ...]] = None,
) -> Derivation:
    """DS -> SS -> LF. force.emphasis here names a surface word.

    raise_order lists quantifier words outermost first; default is surface
    order. Raising happens innermost first so the outermost lands leftmost.
    """
    ss, emphasis_record = apply_emphasis(ds, force, frozenset(), config)
    s = ss
    records: list[MovementRecord] = []
    audible = [it for it in s.items if isinstance(it, (Word, Indexed))]
    has_wh = any(it.text.lower() in config.wh_words for it in audible)
    if has_wh:
        lf = wh_raise(s, config)
    else:
        plain = [
            it.text for it in audible if isinstance(it, Word) and it.text.lower() in config.quantifier_words
        ]
        order = list(raise_order) if raise_order is not None else plain
        for word in reversed(order):
            pos = next(
                (
                    p
                    for p, it in enumerate(s.items)
                    if isinstance(it, Word) and it.text.lower() == word.lower()
                ),
                None,
            )
            if pos is None:
                if any(
                    isinstance(it, Indexed) and it.text.lower() == word.lower()
                    for it in s.items
                ):
                    continue  # already fronted by emphasis: a chain exists
                raise DerivationError(f"no in-situ quantifier word {word!r} to raise")
            raised, record = quantifier_raise(_relabel(s, "SS"), pos, config)
            records.append(record)
            s = raised
        lf = _retype_t_traces(s)
    steps = (
        DerivationStep(ds),
        DerivationStep(ss, (emphasis_record,) if emphasis_record else ()),
        DerivationStep(lf, tuple(records)),
    )
    return Derivation("T", steps)


# -------------------------------------------------------- delexicalization


def delexicalize(lf: SString, f: FRepresentation) -> Formula:
    """Invert lexicalization: read a formula back off a logical-form string."""
    symbol_by_word = {r.word.lower(): r.symbol for r in f.lexical}
    kinds: dict[str, tuple[str, Optional[Formula]]] = {}
    prefix_of_string, _ = _split_reading(f.string)
    for kind, v, restrictor in prefix_of_string:
        kinds[v] = (kind, restrictor)

    flat = [it for it in lf.items if not isinstance(it, (OpenBracket, CloseBracket))]
    i = 0
    prefix: list[tuple[str, str, Optional[Formula]]] = []
    var_by_index: dict[int, str] = {}
    while i < len(flat) and isinstance(flat[i], Indexed):
        word = flat[i].text.lower()
        symbol = symbol_by_word.get(word)
        if symbol is None or not is_variable_name(symbol) or symbol not in kinds:
            raise DelexicalizeFailure(f"fronted word {word!r} is not a known quantifier")
        kind, restrictor = kinds[symbol]
        prefix.append((kind, symbol, restrictor))
        var_by_index[flat[i].index] = symbol
        i += 1

    terms: list = []
    for it in flat[i:]:
        if isinstance(it, Word):
            if f.force.mood == "interrogative" and it.text.lower() == "did":
                continue  # do-support carries no symbol
            symbol = symbol_by_word.get(it.text.lower())
            if symbol is None:
                raise DelexicalizeFailure(f"word {it.text!r} has no symbol")
            terms.append(symbol)
        elif isinstance(it, Trace):
            if it.index not in var_by_index:
                raise DelexicalizeFailure(f"trace {it.index} has no fronted binder")
            terms.append(var(var_by_index[it.index]))
        else:
            raise DelexicalizeFailure(f"unexpected item {it!r} in the matrix")

    def as_term(x) -> Term:
        if isinstance(x, Term):
            return x
        return Term("variable" if is_variable_name(x) else "constant", x)

    if len(terms) == 2 and isinstance(terms[1], str):
        core: Formula = Membership(as_term(terms[0]), terms[1])
    elif len(terms) == 3 and isinstance(terms[1], str):
        core = Membership(as_term(terms[0]), terms[1], as_term(terms[2]))
    else:
        raise DelexicalizeFailure("matrix is not subject-verb(-object) shaped")

    sorts = dict(f.declarants.parameters)
    guards = [
        Membership(var(v), sorts[v]) for kind, v, _ in prefix if kind != "wh" and v in sorts
    ]
    body = core
    if guards:
        # the guard came off f.string's antecedent; restore that exact shape
        _, original_matrix = _split_reading(f.string)
        if isinstance(original_matrix, Implies) and set(
            _conjuncts(original_matrix.left)
        ) == set(guards):
            body = Implies(original_matrix.left, body)
        else:
            acc = guards[-1]
            for g in reversed(guards[:-1]):
                acc = And(g, acc)
            body = Implies(acc, body)
    for kind, v, restrictor in reversed(prefix):
        if kind == "forall":
            body = Forall(v, body)
        elif kind == "exists":
            body = Exists(v, body)
        else:
            if restrictor is None:
                raise DelexicalizeFailure(f"wh variable {v!r} has no restrictor")
            body = WhQuery(v, restrictor, body)
    return body


# ------------------------------------------------------------- comparison


@dataclass(frozen=True)
class CompareReport:
    frep: FRepresentation
    readings: tuple[Formula, ...]
    p: Optional[Derivation] = None
    t: Optional[Derivation] = None
    canonical: Optional[Formula] = None
    recovered: Optional[Formula] = None
    lf_match: Optional[bool] = None
    readings_matched: tuple[bool, ...] = ()
    movement_match: Optional[bool] = None
    formal_only: bool = False
    warnings: tuple[str, ...] = ()

    @property
    def agreed(self) -> bool:
        return bool(self.lf_match) and bool(self.movement_match)


def compare(f: FRepresentation, config: Optional[GrammarConfig] = None) -> CompareReport:
    """Run both pipelines from one F-representation and report agreement.

    Unlexicalizable strings (probability assertions) come back formal_only;
    all other per-stage failures land in warnings rather than raising.
    """
    cfg = config_for(f, config or DEFAULT_CONFIG)
    readings = resolve_scope(f)
    warnings: tuple[str, ...] = ()
    if len(readings) > 1:
        warnings += (f"scope-ambiguous: comparing reading 1 of {len(readings)}",)
    try:
        p = derive_p(f, readings[0], cfg)
    except UnlexicalizableNode as e:
        return CompareReport(
            frep=f,
            readings=readings,
            formal_only=True,
            warnings=warnings + (str(e),),
        )
    ds = p.steps[0].sstring
    raise_order = tuple(
        f.word_of(v) or v for kind, v, _ in _split_reading(readings[0])[0] if kind != "wh"
    )
    t = derive_t(ds, _resolved_force(f), cfg, raise_order=raise_order or None)

    recovered: Optional[Formula] = None
    canonical: Optional[Formula] = None
    lf_match: Optional[bool] = None
    matched: list[bool] = []
    try:
        recovered = delexicalize(t.steps[2].sstring, f)
    except DelexicalizeFailure as e:
        warnings += (str(e),)
    try:
        canonical = canonicalize(readings[0])
    except NotCanonicalizable as e:
        warnings += (str(e),)
    if recovered is not None and canonical is not None:
        lf_match = recovered == canonical
        for r in readings:
            try:
                matched.append(canonicalize(r) == recovered)
            except NotCanonicalizable:
                matched.append(False)
    movement_match = p.steps[1].movements == t.steps[1].movements
    return CompareReport(
        frep=f,
        readings=readings,
        p=p,
        t=t,
        canonical=canonical,
        recovered=recovered,
        lf_match=lf_match,
        readings_matched=tuple(matched),
        movement_match=movement_match,
        warnings=warnings,
    )


# -------------------------------------------------------------------- JSON


def derivation_to_json(d: Derivation) -> dict:
    return {
        "model": d.model,
        "steps": [
            {
                "level": st.sstring.level,
                "rendered": render(st.sstring),
                "stripped": strip(st.sstring),
                "movements": [record_to_json(r) for r in st.movements],
            }
            for st in d.steps
        ],
        "warnings": list(d.warnings),
    }


def report_to_json(r: CompareReport) -> dict:
    return {
        "readings": [render_formula(g) for g in r.readings],
        "p": derivation_to_json(r.p) if r.p else None,
        "t": derivation_to_json(r.t) if r.t else None,
        "canonical": render_formula(r.canonical) if r.canonical else None,
        "recovered": render_formula(r.recovered) if r.recovered else None,
        "lf_match": r.lf_match,
        "readings_matched": list(r.readings_matched),
        "movement_match": r.movement_match,
        "formal_only": r.formal_only,
        "agreed": r.agreed,
        "warnings": list(r.warnings),
    }
