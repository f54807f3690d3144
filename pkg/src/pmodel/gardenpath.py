"""Serial incremental parser that commits early and can be led up the garden
path.

The grammar is binary-branching (every rule has exactly two children) plus
lexical rules mapping categories to words. The parser consumes one word at a
time and keeps exactly one analysis:

  * each word's attachment options are enumerated (reduce the pending
    constituent zero or more times, hook it in as a left corner, then attach
    or project the new word);
  * the option building the fewest new nodes wins (minimal attachment);
  * ties go to the option that closes the fewest open constituents, which
    keeps material inside the most recent phrase (late closure);
  * remaining ties follow rule order in the grammar file.

Because the parser never backtracks, a locally best choice can doom a
globally fine sentence: parse_incremental raises NoAttachment mid-string
even though enumerate_parses (exhaustive chart) finds a tree. That gap is
what is_garden_path() reports.

Reduction is lazy: a completed constituent stays "pending" until the next
word forces a decision about where it belongs, so attachment height is
chosen on evidence, not eagerly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import PmodelError

_CAT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_WORD_RE = re.compile(r"[A-Za-z][a-z'-]*")


class GrammarError(PmodelError):
    pass


class BoundExceeded(PmodelError):
    def __init__(self, n_words: int, max_words: int):
        super().__init__(f"refusing to enumerate parses for {n_words} words (max {max_words})")
        self.n_words = n_words
        self.max_words = max_words


class NoAttachment(PmodelError):
    """The serial parser has nowhere to put `word`."""

    def __init__(self, word: str, position: int):
        super().__init__(f"no attachment for {word!r} at position {position}")
        self.word = word
        self.position = position


class IncompleteParse(PmodelError):
    pass


@dataclass(frozen=True)
class Rule:
    parent: str
    left: str
    right: str


@dataclass(frozen=True)
class LexRule:
    category: str
    word: str


@dataclass(frozen=True)
class ParseTree:
    label: str
    children: tuple["ParseTree", ...] = ()
    word: Optional[str] = None

    def __post_init__(self) -> None:
        if (self.word is None) == (len(self.children) == 0):
            raise GrammarError("a node is either a leaf with a word or has children")

    @property
    def size(self) -> int:
        """Internal node count."""
        if self.word is not None:
            return 0
        return 1 + sum(c.size for c in self.children)

    @property
    def leaves(self) -> tuple[str, ...]:
        if self.word is not None:
            return (self.word,)
        return tuple(w for c in self.children for w in c.leaves)


def render_tree(t: ParseTree) -> str:
    if t.word is not None:
        return f"({t.label} {t.word})"
    return "(" + " ".join([t.label] + [render_tree(c) for c in t.children]) + ")"


def tree_to_json(t: ParseTree) -> dict:
    if t.word is not None:
        return {"label": t.label, "word": t.word}
    return {"label": t.label, "children": [tree_to_json(c) for c in t.children]}


def tree_to_dot(t: ParseTree) -> str:
    lines = ["digraph parsetree {", "  node [shape=plaintext];"]
    counter = [0]

    def emit(node: ParseTree) -> str:
        name = f"n{counter[0]}"
        counter[0] += 1
        lines.append(f'  {name} [label="{node.label}"];')
        if node.word is not None:
            leaf = f"n{counter[0]}"
            counter[0] += 1
            lines.append(f'  {leaf} [label="{node.word}", shape=box];')
            lines.append(f"  {name} -> {leaf};")
        for child in node.children:
            lines.append(f"  {name} -> {emit(child)};")
        return name

    emit(t)
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Grammar:
    start: str
    rules: tuple[Rule, ...]
    lexical: tuple[LexRule, ...]

    def __post_init__(self) -> None:
        if not self.rules and not self.lexical:
            raise GrammarError("empty grammar")
        if len(set(self.rules)) != len(self.rules) or len(set(self.lexical)) != len(self.lexical):
            raise GrammarError("duplicate rule")
        parents = {r.parent for r in self.rules}
        lexcats = {l.category for l in self.lexical}
        for r in self.rules:
            for child in (r.left, r.right):
                if child not in parents and child not in lexcats:
                    raise GrammarError(f"category {child!r} has no rules")
        if self.start not in parents and self.start not in lexcats:
            raise GrammarError(f"start symbol {self.start!r} has no rules")
        # left-corner closure: cat -> categories that can begin it
        cats = parents | lexcats | {r.left for r in self.rules} | {r.right for r in self.rules}
        lc = {c: {c} for c in cats}
        changed = True
        while changed:
            changed = False
            for c in cats:
                for r in self.rules:
                    if r.parent in lc[c] and r.left not in lc[c]:
                        lc[c].add(r.left)
                        changed = True
        object.__setattr__(self, "_lc", {c: frozenset(s) for c, s in lc.items()})

    def left_corners(self, category: str) -> frozenset[str]:
        return self._lc.get(category, frozenset({category}))

    def categories_of(self, word: str) -> tuple[str, ...]:
        return tuple(l.category for l in self.lexical if l.word == word)


def load_grammar(path) -> Grammar:
    """One rule per line: ``S -> NP VP`` or ``N -> 'man' | 'woman'``.

    ``start: S`` overrides the default start symbol (the first rule's
    parent). ``#`` comments and blank lines are skipped.
    """
    rules: list[Rule] = []
    lexical: list[LexRule] = []
    start: Optional[str] = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("start:"):
                start = line.split(":", 1)[1].strip()
                continue
            if "->" not in line:
                raise GrammarError(f"line {lineno}: expected '->'")
            lhs, rhs = (part.strip() for part in line.split("->", 1))
            if not _CAT_RE.fullmatch(lhs):
                raise GrammarError(f"line {lineno}: bad category {lhs!r}")
            for alt in rhs.split("|"):
                parts = alt.split()
                if len(parts) == 1 and parts[0].startswith("'") and parts[0].endswith("'"):
                    word = parts[0][1:-1]
                    if not _WORD_RE.fullmatch(word):
                        raise GrammarError(f"line {lineno}: bad word {parts[0]}")
                    lexical.append(LexRule(lhs, word))
                elif len(parts) == 2 and all(_CAT_RE.fullmatch(p) for p in parts):
                    rules.append(Rule(lhs, parts[0], parts[1]))
                else:
                    raise GrammarError(
                        f"line {lineno}: need two categories or one quoted word, got {alt.strip()!r}"
                    )
    if start is None:
        if not rules:
            raise GrammarError("no rules")
        start = rules[0].parent
    return Grammar(start, tuple(rules), tuple(lexical))


@dataclass(frozen=True)
class Frame:
    """An open binary node: left child built, right child expected."""

    rule: Rule
    left: ParseTree
    ts: int  # when this node was opened; larger = more recent

    @property
    def expect(self) -> str:
        return self.rule.right


@dataclass(frozen=True)
class ParserState:
    frames: tuple[Frame, ...] = ()
    pending: Optional[ParseTree] = None  # completed, not yet attached
    next_ts: int = 0


@dataclass(frozen=True)
class StepInfo:
    category: str
    nodes: int  # new internal nodes this word forced
    pops: int  # constituents closed this word


@dataclass(frozen=True)
class StepChoice:
    word: str
    position: int
    category: str
    nodes: int
    pops: int
    options: int


def _expectation(grammar: Grammar, frames: list[Frame]) -> str:
    return frames[-1].expect if frames else grammar.start


def _dispose(grammar: Grammar, state: ParserState):
    """Ways to clear the pending slot: r reduces, then adjoin as a left
    corner. Yields (frames, pops, new_nodes, next_ts), fewest reduces first.
    """
    if state.pending is None:
        return [(list(state.frames), 0, 0, state.next_ts)]
    out = []
    frames = list(state.frames)
    pend = state.pending
    pops = 0
    while True:
        exp = _expectation(grammar, frames)
        for rule in grammar.rules:
            if rule.left == pend.label and rule.parent in grammar.left_corners(exp):
                out.append(
                    (frames + [Frame(rule, pend, state.next_ts)], pops, 1, state.next_ts + 1)
                )
        if frames and frames[-1].expect == pend.label:
            top = frames.pop()
            pend = ParseTree(top.rule.parent, (top.left, pend))
            pops += 1
        else:
            return out


def step(grammar: Grammar, state: ParserState, word: str):
    """All one-word continuations as (state, info), in preference order
    before cost ranking."""
    options: list[tuple[ParserState, StepInfo]] = []
    for category in grammar.categories_of(word):
        leaf = ParseTree(category, word=word)
        for frames, pops, dnodes, ts in _dispose(grammar, state):
            exp = _expectation(grammar, frames)
            if frames and exp == category:
                top = frames[-1]
                done = ParseTree(top.rule.parent, (top.left, leaf))
                options.append(
                    (
                        ParserState(tuple(frames[:-1]), done, ts),
                        StepInfo(category, dnodes, pops + 1),
                    )
                )
            for rule in grammar.rules:
                if rule.left == category and rule.parent in grammar.left_corners(exp):
                    options.append(
                        (
                            ParserState(tuple(frames) + (Frame(rule, leaf, ts),), None, ts + 1),
                            StepInfo(category, dnodes + 1, pops),
                        )
                    )
            if not frames and category == grammar.start:
                options.append((ParserState((), leaf, ts), StepInfo(category, dnodes, pops)))
    return options


def parse_incremental(grammar: Grammar, words) -> tuple[ParseTree, tuple[StepChoice, ...]]:
    """Parse serially, committing at every word. Minimal attachment, then
    late closure, then rule order."""
    state = ParserState()
    trace: list[StepChoice] = []
    for position, word in enumerate(words):
        options = step(grammar, state, word)
        if not options:
            raise NoAttachment(word, position)
        best = min(range(len(options)), key=lambda k: (options[k][1].nodes, options[k][1].pops, k))
        state, info = options[best]
        trace.append(
            StepChoice(word, position, info.category, info.nodes, info.pops, len(options))
        )
    pend = state.pending
    frames = list(state.frames)
    if pend is not None:
        while frames and frames[-1].expect == pend.label:
            top = frames.pop()
            pend = ParseTree(top.rule.parent, (top.left, pend))
    if pend is None or frames or pend.label != grammar.start:
        raise IncompleteParse(f"input ended with unmet expectations after {len(trace)} words")
    return pend, tuple(trace)


def enumerate_parses(grammar: Grammar, words, max_words: int = 10) -> tuple[ParseTree, ...]:
    """Every parse, by exhaustive chart; the oracle the serial parser is
    measured against."""
    words = list(words)
    n = len(words)
    if n == 0:
        return ()
    if n > max_words:
        raise BoundExceeded(n, max_words)
    chart: dict[tuple[int, int], dict[str, list[ParseTree]]] = {}
    for i, w in enumerate(words):
        cell: dict[str, list[ParseTree]] = {}
        for category in grammar.categories_of(w):
            cell.setdefault(category, []).append(ParseTree(category, word=w))
        chart[(i, i + 1)] = cell
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            k = i + span
            cell = {}
            for j in range(i + 1, k):
                lefts = chart[(i, j)]
                rights = chart[(j, k)]
                for rule in grammar.rules:
                    for lt in lefts.get(rule.left, ()):
                        for rt in rights.get(rule.right, ()):
                            cell.setdefault(rule.parent, []).append(
                                ParseTree(rule.parent, (lt, rt))
                            )
            chart[(i, k)] = cell
    return tuple(chart[(0, n)].get(grammar.start, ()))


def is_garden_path(grammar: Grammar, words) -> bool:
    """Grammatical, yet the serial parser chokes."""
    if not enumerate_parses(grammar, words):
        return False
    try:
        parse_incremental(grammar, words)
    except (NoAttachment, IncompleteParse):
        return True
    return False
