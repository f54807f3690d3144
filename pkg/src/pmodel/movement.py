"""Movement between representation levels.

Upward (surface to logical form): quantifier_raise fronts a quantifier word
and leaves an x-trace; wh_raise retypes the overt t-trace as an x-trace
without reordering. Downward (logical form to deep structure): the lowering
ops move the fronted item back into its trace slot, mark the vacated front
with a y-trace and flatten all brackets. apply_emphasis realizes deep
structure as surface structure: interrogative mood fronts the Wh item,
emphasis topicalizes its target, and with neither the vacuous y-traces are
erased.

Index bookkeeping: new chains take max(used) + 1 starting at 1, which is
what the rendered subscripts in derivations look like. (fresh_index in the
sstring module is the smallest-unused convention; both are deliberate.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import PmodelError
from .sstring import CloseBracket, Indexed, OpenBracket, SString, Trace, Word


class MovementError(PmodelError):
    pass


class LevelMismatch(MovementError):
    def __init__(self, expected: str, got: str):
        super().__init__(f"operation needs a {expected} string, got {got}")
        self.expected = expected
        self.got = got


class NotAQuantifier(MovementError):
    def __init__(self, position: int):
        super().__init__(f"item at position {position} is not a known quantifier word")
        self.position = position


class NoWhItem(MovementError):
    pass


class MultipleWhItems(MovementError):
    pass


class NoFrontedQuantifier(MovementError):
    pass


class BrokenCoindexation(MovementError):
    pass


class EmphasisTargetMissing(MovementError):
    def __init__(self, name: str):
        super().__init__(f"no audible item matches emphasis target {name!r}")
        self.name = name


class BindingViolation(MovementError):
    def __init__(self, word: str):
        super().__init__(f"binding constraint broken for {word!r}")
        self.word = word


@dataclass(frozen=True)
class GrammarConfig:
    """Word-class knowledge and movement switches for a (toy) language."""

    quantifier_words: frozenset[str] = frozenset(
        {"everyone", "everybody", "everything", "someone", "somebody", "something"}
    )
    wh_words: frozenset[str] = frozenset({"who", "whom", "what", "which", "whose"})
    wh_fronting: bool = True
    quantifiers_land_last: bool = False  # alternative landing site, off by default


DEFAULT_CONFIG = GrammarConfig()


@dataclass(frozen=True)
class MovementRecord:
    operation: str
    index: int
    source: int  # position of the trace in the resulting item sequence
    target: int  # position of the landed item in the resulting item sequence

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise ValueError("a movement record needs distinct source and target")


def record_to_json(r: MovementRecord) -> dict:
    return {"operation": r.operation, "index": r.index, "source": r.source, "target": r.target}


def _next_index(s: SString) -> int:
    used = [i.index for i in s.items if isinstance(i, (Indexed, Trace))]
    return max(used, default=0) + 1


def _audible_positions(items) -> list[int]:
    return [pos for pos, it in enumerate(items) if isinstance(it, (Word, Indexed))]


def _capitalize(text: str) -> str:
    return text[:1].upper() + text[1:]


def _lowercase(text: str) -> str:
    return text[:1].lower() + text[1:]


def _adjust_case(items: list, pos: int) -> None:
    """Sentence-position case: surface-initial items capitalize, others don't."""
    audible = _audible_positions(items)
    item = items[pos]
    text = _capitalize(item.text) if audible and pos == audible[0] else _lowercase(item.text)
    if isinstance(item, Indexed):
        items[pos] = Indexed(text, item.index)
    else:
        items[pos] = Word(text)


def _positions_of_index(items, index: int) -> tuple[int, int]:
    ipos = tpos = -1
    for pos, it in enumerate(items):
        if isinstance(it, Indexed) and it.index == index:
            ipos = pos
        elif isinstance(it, Trace) and it.index == index:
            tpos = pos
    return ipos, tpos


def quantifier_raise(
    s: SString, qpos: int, config: GrammarConfig = DEFAULT_CONFIG
) -> tuple[SString, MovementRecord]:
    """SS -> LF: front the quantifier word at qpos, leaving an x-trace.

    When the quantifier crosses audible material the landing is decorated as
    [ q [ ... ] ]; a quantifier that is already first stays undecorated.
    """
    if s.level != "SS":
        raise LevelMismatch("SS", s.level)
    if not 0 <= qpos < len(s.items) or not isinstance(s.items[qpos], Word):
        raise NotAQuantifier(qpos)
    word = s.items[qpos]
    if word.text.lower() not in config.quantifier_words:
        raise NotAQuantifier(qpos)

    index = _next_index(s)
    rest = list(s.items)
    rest[qpos] = Trace("x", index)
    mover = Indexed(word.text, index)
    crossed = any(p < qpos for p in _audible_positions(s.items))
    items: list
    if config.quantifiers_land_last:
        items = rest + [mover]
    elif crossed:
        items = [OpenBracket(), mover, OpenBracket(), *rest, CloseBracket(), CloseBracket()]
    else:
        items = [mover] + rest
    _adjust_case(items, items.index(mover))
    result = SString("LF", tuple(items), s.punctuation)
    ipos, tpos = _positions_of_index(result.items, index)
    return result, MovementRecord("quantifier_raise", index, source=tpos, target=ipos)


def wh_raise(s: SString, config: GrammarConfig = DEFAULT_CONFIG) -> SString:
    """SS -> LF: covert movement; t-traces become x-traces, order unchanged."""
    if s.level != "SS":
        raise LevelMismatch("SS", s.level)
    wh = [
        pos
        for pos, it in enumerate(s.items)
        if isinstance(it, (Word, Indexed)) and it.text.lower() in config.wh_words
    ]
    if not wh:
        raise NoWhItem("no Wh item to interpret")
    if len(wh) > 1:
        raise MultipleWhItems("more than one Wh item")
    t_traces = [it for it in s.items if isinstance(it, Trace) and it.kind == "t"]
    if len(t_traces) > 1:
        raise BrokenCoindexation("more than one t-trace")
    items = [
        Trace("x", it.index) if isinstance(it, Trace) and it.kind == "t" else it
        for it in s.items
    ]
    return SString("LF", tuple(items), s.punctuation)


def _lower(
    s: SString,
    words: frozenset[str],
    operation: str,
    missing_error: type,
) -> tuple[SString, MovementRecord]:
    if s.level != "LF":
        raise LevelMismatch("LF", s.level)
    flat = [it for it in s.items if not isinstance(it, (OpenBracket, CloseBracket))]
    audible = _audible_positions(flat)
    if not audible:
        raise missing_error("nothing audible to lower")
    qpos = audible[0]
    fronted = flat[qpos]
    if not isinstance(fronted, Indexed) or fronted.text.lower() not in words:
        raise missing_error(f"first audible item {fronted!r} is not lowerable")
    index = fronted.index
    tpos = next(
        (
            pos
            for pos, it in enumerate(flat)
            if isinstance(it, Trace) and it.index == index and it.kind == "x"
        ),
        -1,
    )
    if tpos < 0:
        raise BrokenCoindexation(f"index {index} has no x-trace")
    flat[tpos] = Indexed(fronted.text, index)
    flat[qpos] = Trace("y", index)
    _adjust_case(flat, tpos)
    result = SString("DS", tuple(flat), s.punctuation)
    return result, MovementRecord(operation, index, source=qpos, target=tpos)


def quantifier_lower(
    s: SString, config: GrammarConfig = DEFAULT_CONFIG
) -> tuple[SString, MovementRecord]:
    """LF -> DS: the fronted quantifier returns to its x-trace slot; a y-trace
    marks the vacated front and the bracket decoration is dropped."""
    return _lower(s, config.quantifier_words, "quantifier_lower", NoFrontedQuantifier)


def wh_lower(s: SString, config: GrammarConfig = DEFAULT_CONFIG) -> tuple[SString, MovementRecord]:
    """LF -> DS: like quantifier_lower but for the fronted Wh item."""
    return _lower(s, config.wh_words, "wh_lower", NoWhItem)


def _erase_vacuous(items: list) -> None:
    """Drop every y-trace and de-index its in-situ partner."""
    y_indices = {it.index for it in items if isinstance(it, Trace) and it.kind == "y"}
    kept = []
    for it in items:
        if isinstance(it, Trace) and it.kind == "y":
            continue
        if isinstance(it, Indexed) and it.index in y_indices:
            kept.append(Word(it.text))
        else:
            kept.append(it)
    items[:] = kept


def apply_emphasis(
    s: SString,
    force,
    binding=frozenset(),
    config: GrammarConfig = DEFAULT_CONFIG,
) -> tuple[SString, Optional[MovementRecord]]:
    """DS -> SS realization driven by force.

    Interrogative mood fronts the Wh item into the y-trace position with a
    t-trace chain and decorates the clause as [CP wh aux [IP ...]]; emphasis
    topicalizes its target word the same way; with neither, vacuous y-traces
    are erased and the plain order surfaces. The word must come out exactly
    once for every word bound in the binding constraints.
    """
    if s.level != "DS":
        raise LevelMismatch("DS", s.level)
    mood = getattr(force, "mood", "declarative")
    emphasis = getattr(force, "emphasis", None)
    items = [it for it in s.items if not isinstance(it, (OpenBracket, CloseBracket))]

    moved_index: Optional[int] = None
    operation = None
    wh_positions = [
        pos
        for pos, it in enumerate(items)
        if isinstance(it, (Word, Indexed)) and it.text.lower() in config.wh_words
    ]
    if mood == "interrogative" and wh_positions and config.wh_fronting:
        if len(wh_positions) > 1:
            raise MultipleWhItems("more than one Wh item")
        moved_index = _front(items, wh_positions[0])
        operation = "wh_fronting"
    elif emphasis is not None:
        wanted = emphasis.lower()
        target = next(
            (
                pos
                for pos, it in enumerate(items)
                if isinstance(it, (Word, Indexed)) and it.text.lower() == wanted
            ),
            None,
        )
        if target is None:
            raise EmphasisTargetMissing(emphasis)
        moved_index = _front(items, target)
        operation = "emphasis_fronting"

    _erase_vacuous(items)
    audible = _audible_positions(items)
    if audible:
        _adjust_case(items, audible[0])

    if operation == "wh_fronting":
        _decorate_interrogative(items)

    result = SString("SS", tuple(items), s.punctuation)
    for word, _ in binding:
        count = sum(
            1 for it in result.items if isinstance(it, (Word, Indexed)) and it.text.lower() == word.lower()
        )
        if count != 1:
            raise BindingViolation(word)
    record = None
    if moved_index is not None:
        ipos, tpos = _positions_of_index(result.items, moved_index)
        record = MovementRecord(operation, moved_index, source=tpos, target=ipos)
    return result, record


def _front(items: list, pos: int) -> int:
    """Move items[pos] into its y-trace slot (or to the very front), leaving
    a t-trace behind. Returns the chain index."""
    item = items[pos]
    if isinstance(item, Indexed):
        index = item.index
        ypos = next(
            (
                p
                for p, it in enumerate(items)
                if isinstance(it, Trace) and it.index == index and it.kind == "y"
            ),
            None,
        )
        if ypos is None:
            raise BrokenCoindexation(f"index {index} has no y-trace to land in")
        items[ypos] = Indexed(item.text, index)
        items[pos] = Trace("t", index)
        _adjust_case(items, ypos)
        return index
    index = max(
        [it.index for it in items if isinstance(it, (Indexed, Trace))], default=0
    ) + 1
    items[pos] = Trace("t", index)
    items.insert(0, Indexed(item.text, index))
    _adjust_case(items, 0)
    return index


def _decorate_interrogative(items: list) -> None:
    """[CP wh aux [IP rest]] decoration when an auxiliary and more follow."""
    audible = _audible_positions(items)
    if len(audible) < 3 or audible[:2] != [0, 1]:
        return
    head, aux, *rest = items
    items[:] = [OpenBracket("CP"), head, aux, OpenBracket("IP"), *rest, CloseBracket(), CloseBracket()]
