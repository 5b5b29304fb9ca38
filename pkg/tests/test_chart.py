import io

import pytest
from hypothesis import given, settings, strategies as st

from tiparse.chart import (STRATEGIES, Complete, ItemBudgetExceeded, UnknownNonterminal,
                           declare_header_tokens, parse, parse_with_declares)
from tiparse.grammar import Grammar, GrammarError, Nonterminal, Rule, Terminal
from tiparse.lexer import tokenize
from tiparse.trees import Leaf, sexpr, tree_yield

from conftest import (brute_trees, catalan, cyk_count, grammar_of, random_pair, toks)

SINGLE = grammar_of('module M { S ::= "a"; }')

TYPED_1 = grammar_of('module T0 { E ::= V; V ::= "-" V; } module T1 { E ::= M1; M1 ::= "-" M1; }')


@pytest.mark.parametrize("strategy,expected", [("earley_td", 4), ("earley_bu", 3), ("island", 2)])
def test_single_rule_item_counts(strategy, expected):
    # td: Hyp, Init, Compl, Fnsh; bu: Hyp, BU, Fnsh; island: Hyp, Islnd
    r = parse(SINGLE, toks("a"), strategy, "S")
    assert r.items_generated == expected
    assert [sexpr(t) for t in r.trees] == ["(S a)"]


def test_typed_minus_minus_a():
    tokens = toks("- - A")
    for strategy in STRATEGIES:
        r = parse_with_declares(TYPED_1, [("A", "V")], tokens, strategy, "E")
        assert [sexpr(t) for t in r.trees] == ["(E (V - (V - (V A))))"]


def test_declare_extents():
    r = parse_with_declares(TYPED_1, [("A", "V")], toks("- - A"), "island", "E")
    # declare A : V {
    assert declare_header_tokens(1) == 5
    assert r.header_tokens == 5
    assert r.body_extent == (5, 8)
    assert r.outer_extent == (0, 9)


def test_declared_type_must_exist():
    with pytest.raises(UnknownNonterminal):
        parse_with_declares(TYPED_1, [("A", "Nope")], toks("A"), "island")


def test_no_parse_gives_empty_result():
    r = parse(SINGLE, toks("a a"), "island", "S")
    assert r.trees == []


def test_budget():
    g = grammar_of('module M { E ::= "x" | E "+" E; }')
    with pytest.raises(ItemBudgetExceeded) as err:
        parse(g, toks("x + x + x + x"), "earley_td", "E", budget=10)
    assert err.value.items == 11


def test_trace_lines_name_the_rule():
    out = io.StringIO()
    parse(SINGLE, toks("a"), "earley_td", "S", trace=out)
    lines = out.getvalue().splitlines()
    assert [line.split()[0] for line in lines] == ["Hyp", "Init", "Compl", "Fnsh"]


def test_island_rejects_multi_terminal_rules():
    g = Grammar([Rule(Nonterminal("S"), (Terminal("a"), Terminal("b")))])
    with pytest.raises(GrammarError):
        parse(g, toks("a b"), "island")
    assert parse(g, toks("a b"), "earley_td", "S").trees


def test_unknown_strategy():
    with pytest.raises(ValueError):
        parse(SINGLE, toks("a"), "cyk")


def test_declared_names_shadow_identifiers():
    g = grammar_of('module M { E ::= Id | V; Id ::= #rx"^[a-z]+$"; V ::= "-" V; }')
    r = parse_with_declares(g, [("x", "V")], toks("x"), "island", "E")
    assert [sexpr(t) for t in r.trees] == ["(E (V x))"]
    plain = parse(g, toks("x"), "island", "E")
    assert [sexpr(t) for t in plain.trees] == ["(E (Id x))"]


def test_parameterized_rule_instantiates_by_lub(ml):
    tokens, _ = tokenize("if 1 < 2 then 3 else 4", ml)
    for strategy in STRATEGIES:
        r = parse(ml, tokens, strategy, "Int")
        assert len(r.trees) == 1, strategy
        assert r.trees[0].subst == {"T": "Int"}


def test_plus_tree_counts_match_catalan():
    g = grammar_of('module M { E ::= Id | E "+" E; Id ::= #rx"^[a-z]+$"; }')
    for n in range(1, 6):
        words = " + ".join(["a"] * (n + 1)).split()
        tokens, _ = tokenize(" ".join(words), g)
        counts = {s: len(parse(g, tokens, s, "E", gate=False).trees) for s in STRATEGIES}
        assert set(counts.values()) == {cyk_count(words)} == {catalan(n)}


def test_full_trees_yield_the_input():
    g = grammar_of('module M { S ::= S "a" | "b" S | "a"; }')
    words = "b a a".split()
    for strategy in STRATEGIES:
        for t in parse(g, toks(words), strategy).trees:
            assert tree_yield(t) == words


@pytest.mark.parametrize("seed", range(15))
def test_strategies_agree_with_brute_force(seed):
    g, words = random_pair(seed)
    expected = brute_trees(g, words)
    for strategy in STRATEGIES:
        got = set(parse(g, toks(words), strategy, gate=False).trees)
        assert got == expected, (strategy, str(g), words)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_strategy_equivalence_property(seed):
    g, words = random_pair(seed)
    sets = [set(parse(g, toks(words), s).trees) for s in STRATEGIES]
    assert sets[0] == sets[1] == sets[2]


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_agenda_order_does_not_change_the_chart(seed):
    g, words = random_pair(seed, annotate=True)
    for s in STRATEGIES:
        a = parse(g, toks(words), s, agenda="lifo").chart.keys()
        b = parse(g, toks(words), s, agenda="fifo").chart.keys()
        assert a == b


def test_items_are_deduplicated():
    g = grammar_of('module M { E ::= "x" | E "+" E; }')
    r = parse(g, toks("x + x + x"), "earley_td", "E", gate=False)
    assert r.items_generated == len(r.chart.items)
    assert r.metrics["deduplicated"] > 0


def test_items_include_hypotheses():
    r = parse(SINGLE, toks("a"), "island", "S")
    assert Complete(Leaf("a"), 0, 1) in r.chart.items
