"""Serial parsing and attachment preferences.

The oracle here is a span-recursive chart parser written directly from the
grammar definition (memoized divide and conquer over word ranges), so parse
sets from enumerate_parses are checked against a second implementation.
"""
from __future__ import annotations

from functools import lru_cache

import pytest

from conftest import CORPUS_DIR
from pmodel.gardenpath import (
    BoundExceeded,
    Grammar,
    GrammarError,
    IncompleteParse,
    LexRule,
    NoAttachment,
    ParserState,
    ParseTree,
    Rule,
    enumerate_parses,
    is_garden_path,
    load_grammar,
    parse_incremental,
    render_tree,
    step,
    tree_to_dot,
)

GRAMMAR = load_grammar(CORPUS_DIR / "grammar.cfg")
SENTENCES = [
    line.split()
    for line in (CORPUS_DIR / "sentences.txt").read_text().splitlines()
    if line and not line.startswith("#")
]
PP_SENTENCE = "the man saw the dog in the park".split()
GP_SENTENCE = "the woman knows the man left".split()


def oracle_trees(grammar: Grammar, words: list[str]) -> set[str]:
    """All parses of words, as rendered strings, by span recursion."""
    words = tuple(words)

    @lru_cache(maxsize=None)
    def spans(label: str, i: int, j: int) -> tuple[ParseTree, ...]:
        found = []
        if j - i == 1:
            for rule in grammar.lexical:
                if rule.category == label and rule.word == words[i]:
                    found.append(ParseTree(label, word=words[i]))
        for rule in grammar.rules:
            if rule.parent != label:
                continue
            for k in range(i + 1, j):
                for left in spans(rule.left, i, k):
                    for right in spans(rule.right, k, j):
                        found.append(ParseTree(label, (left, right)))
        return tuple(found)

    return {render_tree(t) for t in spans(grammar.start, 0, len(words))}


# ----------------------------------------------------------------- grammar


def test_load_grammar_shape():
    assert GRAMMAR.start == "S"
    assert Rule("S", "NP", "VP") in GRAMMAR.rules
    assert LexRule("DET", "the") in GRAMMAR.lexical
    assert "N" in GRAMMAR.categories_of("man")


def test_grammar_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("S -> NP VP PP\n")  # ternary rule
    with pytest.raises(GrammarError):
        load_grammar(bad)
    empty = tmp_path / "empty.cfg"
    empty.write_text("# nothing\n")
    with pytest.raises(GrammarError):
        load_grammar(empty)


# ------------------------------------------------------------- enumeration


def test_enumerate_matches_oracle_on_corpus():
    for words in SENTENCES:
        got = {render_tree(t) for t in enumerate_parses(GRAMMAR, words)}
        assert got == oracle_trees(GRAMMAR, words), " ".join(words)


def test_enumerate_matches_oracle_on_junk():
    for words in (["man", "the"], ["saw"], ["the", "the", "the"], ["in", "the", "park"]):
        assert {render_tree(t) for t in enumerate_parses(GRAMMAR, words)} == oracle_trees(GRAMMAR, words)


def test_pp_attachment_is_twofold():
    parses = enumerate_parses(GRAMMAR, PP_SENTENCE)
    assert len(parses) == 2
    assert {t.size for t in parses} == {7}  # both attachments cost the same


def test_enumeration_bound():
    with pytest.raises(BoundExceeded):
        enumerate_parses(GRAMMAR, ["the"] * 11)
    assert enumerate_parses(GRAMMAR, []) == ()


# ---------------------------------------------------------- serial parsing


def test_parse_incremental_simple():
    tree, steps = parse_incremental(GRAMMAR, ["the", "man", "left"])
    assert render_tree(tree) == "(S (NP (DET the) (N man)) (IV left))"
    assert [s.nodes for s in steps] == [1, 0, 1]
    assert tree.size == 2
    assert tree.leaves == ("the", "man", "left")


def test_step_trace_fields():
    _, steps = parse_incremental(GRAMMAR, ["the", "man", "left"])
    first = steps[0]
    assert (first.word, first.position, first.category) == ("the", 0, "DET")


def test_no_attachment_carries_position():
    with pytest.raises(NoAttachment) as exc:
        parse_incremental(GRAMMAR, ["left", "the", "man"])
    assert exc.value.word == "left" and exc.value.position == 0


def test_incomplete_parse():
    with pytest.raises(IncompleteParse):
        parse_incremental(GRAMMAR, ["the", "man", "saw"])


def test_unknown_word_fails():
    with pytest.raises(NoAttachment):
        parse_incremental(GRAMMAR, ["the", "gorilla", "left"])


# ------------------------------------------------------------- preferences


def replay_options(words: list[str], upto: int):
    """Drive the parser to word `upto` and return that word's option list."""
    state = ParserState()
    for word in words[:upto]:
        options = step(GRAMMAR, state, word)
        best = min(range(len(options)), key=lambda k: (options[k][1].nodes, options[k][1].pops, k))
        state = options[best][0]
    return step(GRAMMAR, state, words[upto])


def test_late_closure_breaks_the_tie():
    # at "in" both attachments open the same number of new nodes; the parser
    # must keep the current noun phrase open (fewer pops) rather than close
    # it and attach high
    options = replay_options(PP_SENTENCE, 5)
    infos = [info for _, info in options]
    assert len(infos) == 2
    assert infos[0].nodes == infos[1].nodes
    assert infos[0].pops != infos[1].pops
    tree, steps = parse_incremental(GRAMMAR, PP_SENTENCE)
    assert steps[5].pops == min(i.pops for i in infos)
    assert "(NP (NP (DET the) (N dog)) (PP" in render_tree(tree)  # low attachment


def test_serial_choice_is_minimal_on_pp_sentence():
    tree, steps = parse_incremental(GRAMMAR, PP_SENTENCE)
    assert steps[5].options == 2
    assert tree.size == min(t.size for t in enumerate_parses(GRAMMAR, PP_SENTENCE))


def test_minimality_across_corpus():
    for words in SENTENCES:
        try:
            tree, _ = parse_incremental(GRAMMAR, words)
        except (NoAttachment, IncompleteParse):
            continue
        best = min(t.size for t in enumerate_parses(GRAMMAR, words))
        assert tree.size == best, " ".join(words)


# ------------------------------------------------------------- garden path


def test_garden_path_witness():
    # grammatical (complement-clause reading exists) but the serial parser
    # commits to "knows the man" as a finished object and chokes on "left"
    assert enumerate_parses(GRAMMAR, GP_SENTENCE)
    with pytest.raises(NoAttachment):
        parse_incremental(GRAMMAR, GP_SENTENCE)
    assert is_garden_path(GRAMMAR, GP_SENTENCE)


def test_non_garden_paths():
    assert not is_garden_path(GRAMMAR, ["the", "man", "left"])
    assert not is_garden_path(GRAMMAR, PP_SENTENCE)
    assert not is_garden_path(GRAMMAR, ["the", "gorilla", "left"])  # ungrammatical


def test_corpus_contains_a_garden_path():
    assert any(is_garden_path(GRAMMAR, words) for words in SENTENCES)


# ------------------------------------------------------------------- trees


def test_tree_size_counts_internal_nodes():
    t = ParseTree("S", (ParseTree("NP", word="Jones"), ParseTree("IV", word="left")))
    assert t.size == 1
    assert t.leaves == ("Jones", "left")


def test_tree_to_dot_smoke():
    tree, _ = parse_incremental(GRAMMAR, ["the", "man", "left"])
    dot = tree_to_dot(tree)
    assert dot.startswith("digraph")
    assert 'label="man"' in dot
