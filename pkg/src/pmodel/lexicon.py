"""Cohort-style word recognition over a small lexicon.

A partially heard token is written with ``#`` for each unrecoverable
grapheme ("Jon#s", "s#w"). Recognition runs in three fixed stages, in this
order and never reordered:

  access     every entry whose form starts with the clean prefix (the part
             before the first ``#``), case-insensitive; the cohort is kept
             sorted by descending frequency then form
  select     rank the cohort by edit distance to the full observed token;
             ties fall to higher frequency, then alphabetical form, then
             category
  integrate  a stable filter by expected syntactic category; context acts
             only after selection and never reorders it

recognize() composes the stages per token and enforces a distance budget:
a candidate is rejected when the distance exceeds half its form length
(rounded up), so a token more than half unheard never produces a guess.
Failure on a slot raises NoCandidate carrying the slot index and the
entries recovered so far.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import PmodelError
from .frep import CATEGORIES

_FORM_RE = re.compile(r"[A-Za-z][A-Za-z'-]*")

Ranked = tuple[tuple["LexEntry", int], ...]


class LexiconError(PmodelError):
    pass


class NoCandidate(PmodelError):
    """Recognition failed at slot `slot`; `partial` holds the slots before it."""

    def __init__(self, slot: int, token: str, partial: tuple["LexEntry", ...] = ()):
        super().__init__(f"no candidate for token {token!r} at slot {slot}")
        self.slot = slot
        self.token = token
        self.partial = partial


@dataclass(frozen=True)
class LexEntry:
    form: str
    category: str
    features: frozenset[str] = frozenset()
    frequency: int = 1
    symbol: Optional[str] = None

    def __post_init__(self) -> None:
        if not _FORM_RE.fullmatch(self.form):
            raise LexiconError(f"bad form {self.form!r}")
        if self.category not in CATEGORIES:
            raise LexiconError(f"bad category {self.category!r} for {self.form!r}")
        if self.frequency < 0:
            raise LexiconError(f"negative frequency for {self.form!r}")


@dataclass(frozen=True)
class Lexicon:
    entries: tuple[LexEntry, ...]

    def __post_init__(self) -> None:
        seen = set()
        for e in self.entries:
            key = (e.form.casefold(), e.category)
            if key in seen:
                raise LexiconError(f"duplicate entry {e.form!r}/{e.category}")
            seen.add(key)

    def lookup(self, form: str) -> tuple[LexEntry, ...]:
        needle = form.casefold()
        return tuple(e for e in self.entries if e.form.casefold() == needle)


def load_lexicon(path) -> Lexicon:
    """Tab-separated: form, category, features, frequency, optional symbol.

    features is "-" or a comma-separated list; lines starting with "#" and
    blank lines are skipped.
    """
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) not in (4, 5):
                raise LexiconError(f"line {lineno}: expected 4 or 5 columns, got {len(cols)}")
            form, category, feats, freq = cols[:4]
            symbol = cols[4] if len(cols) == 5 and cols[4] else None
            features = frozenset() if feats == "-" else frozenset(feats.split(","))
            try:
                frequency = int(freq)
            except ValueError:
                raise LexiconError(f"line {lineno}: bad frequency {freq!r}") from None
            entries.append(LexEntry(form, category, features, frequency, symbol))
    return Lexicon(tuple(entries))


def _cohort_key(e: LexEntry):
    return (-e.frequency, e.form, e.category)


@dataclass(frozen=True)
class Cohort:
    prefix: str
    members: tuple[LexEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(sorted(self.members, key=_cohort_key)))


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance, unit costs."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def access(lexicon: Lexicon, prefix: str) -> Cohort:
    """Entries activated by an initial grapheme sequence."""
    needle = prefix.casefold()
    return Cohort(
        prefix, tuple(e for e in lexicon.entries if e.form.casefold().startswith(needle))
    )


def select(cohort: Cohort, observed: str) -> Ranked:
    """Rank the cohort by fit to the observed token, nearest first.

    ``#`` matches no grapheme, so every corrupted position costs one edit.
    """
    needle = observed.casefold()
    ranked = [(e, edit_distance(needle, e.form.casefold())) for e in cohort.members]
    ranked.sort(key=lambda pair: (pair[1], _cohort_key(pair[0])))
    return tuple(ranked)


def integrate(ranked: Ranked, expected) -> Ranked:
    """Keep candidates whose category is expected; order untouched."""
    if expected is None:
        return tuple(ranked)
    allowed = set(expected)
    return tuple((e, d) for e, d in ranked if e.category in allowed)


def _budget(entry: LexEntry, threshold: Optional[int]) -> int:
    if threshold is not None:
        return threshold
    return (len(entry.form) + 1) // 2  # more than half unheard: no guess


def recognize(
    lexicon: Lexicon,
    tokens: Sequence[str],
    expected_per_slot: Optional[Sequence] = None,
    threshold: Optional[int] = None,
) -> tuple[LexEntry, ...]:
    """Access, select, integrate for each token; top surviving candidate per
    slot. `expected_per_slot` aligns category sets (or None) with tokens;
    `threshold` overrides the per-form distance budget."""
    tokens = list(tokens)
    if not tokens:
        raise LexiconError("recognize needs at least one token")
    if expected_per_slot is not None and len(expected_per_slot) != len(tokens):
        raise LexiconError("expected_per_slot does not align with tokens")
    out: list[LexEntry] = []
    for slot, token in enumerate(tokens):
        expected = expected_per_slot[slot] if expected_per_slot is not None else None
        cohort = access(lexicon, token.split("#", 1)[0])
        ranked = integrate(select(cohort, token), expected)
        best = next((e for e, d in ranked if d <= _budget(e, threshold)), None)
        if best is None:
            raise NoCandidate(slot, token, tuple(out))
        out.append(best)
    return tuple(out)
