import pytest
from hypothesis import given, settings, strategies as st

from tiparse.lexer import (BUILTIN_CLASSES, UnbalancedBraces, hypotheses, split_chunk,
                           tokenize, tokenize_flat)

from conftest import corpus_grammar, corpus_text
from tiparse.reader import read_modules


def texts(tokens):
    return [t.text for t in tokens]


def test_let_program_regions(ml):
    body = read_modules(corpus_text("programs/let.es")).program_body
    tokens, regions = tokenize(body, ml)
    assert texts(tokens) == ["let", "n", "=", "7", "{0}"]
    assert tokens[-1].kind == "region"
    inner = texts(regions[0].tokens)
    assert inner[:4] == ["if", "n", "<", "3"]
    assert inner[-2:] == ["5", ";"]
    assert regions.depth(0) == 1


def test_nested_regions_are_numbered_in_preorder():
    g = corpus_grammar("ML", "Sets")
    body = read_modules(corpus_text("programs/sets.es")).program_body
    tokens, regions = tokenize(body, g)
    assert texts(tokens) == ["let", "A", "=", "{0}", "{1}"]
    assert texts(regions[0].tokens) == ["1", ",", "2", ",", "3"]
    assert texts(regions[1].tokens) == ["let", "B", "=", "{2}", "{3}"]
    assert regions.depth(5) == 3
    assert regions[5].parent == 3


def test_literals_win_ties_and_longest_match():
    assert split_chunk("x+y", {"+"}, BUILTIN_CLASSES) == ["x", "+", "y"]
    assert split_chunk("a<=b", {"<", "<="}, BUILTIN_CLASSES) == ["a", "<=", "b"]
    # 'let' is both an identifier and a literal: same length, the literal wins
    assert split_chunk("let", {"let"}, BUILTIN_CLASSES) == ["let"]
    assert split_chunk("letter", {"let"}, BUILTIN_CLASSES) == ["letter"]
    assert split_chunk("v1'", {"'"}, BUILTIN_CLASSES) == ["v1", "'"]


def test_unknown_punctuation_is_a_single_char_token():
    assert split_chunk("a@b", set(), BUILTIN_CLASSES) == ["a", "@", "b"]
    assert split_chunk("@@", set(), ()) == ["@", "@"]


def test_unbalanced_braces_report_position():
    with pytest.raises(UnbalancedBraces) as err:
        tokenize("a {\n b")
    assert (err.value.line, err.value.column) == (1, 3)
    with pytest.raises(UnbalancedBraces) as err:
        tokenize("a\n  }")
    assert (err.value.line, err.value.column) == (2, 3)


def test_positions(ml):
    tokens, _ = tokenize("let n\n  = 7 {}", ml)
    assert [(t.line, t.column) for t in tokens] == [(1, 1), (1, 5), (2, 3), (2, 5), (2, 7)]


def test_flat_tokenizer_keeps_braces(ml):
    assert tokenize_flat("let x = 1 { print x; }", ml) == [
        "let", "x", "=", "1", "{", "print", "x", ";", "}"]


def test_hypotheses():
    tokens, _ = tokenize("a + b")
    assert hypotheses(tokens) == {("a", 0, 1), ("+", 1, 2), ("b", 2, 3)}


@given(st.lists(st.sampled_from(["A", "+", "*", "b1", "42", "-", "(", ")"]), min_size=1,
                max_size=12))
@settings(max_examples=80, deadline=None)
def test_spaced_tokens_survive_tokenization(ws):
    g = corpus_grammar("MatrixAlgebra", subdir="fig3")
    tokens, regions = tokenize(" ".join(ws), g)
    assert texts(tokens) == ws
    assert len(regions) == 0


@given(st.recursive(st.just("x"), lambda inner: st.lists(inner, max_size=3).map(
    lambda xs: "{ %s }" % " ".join(xs)), max_leaves=10))
@settings(max_examples=60, deadline=None)
def test_region_count_matches_brace_pairs(text):
    tokens, regions = tokenize(text)
    assert len(regions) == text.count("{")
    assert all(t.kind != "literal" or t.text not in "{}" for t in tokens)
