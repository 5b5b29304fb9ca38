import csv
import io
from fractions import Fraction

import pytest

from tiparse.bench import (CSV_COLUMNS, FAMILIES, Scenario, compose, gen_scenario, measure,
                           run_suite, sparsity, to_csv, to_tsv, untyped_module)
from tiparse.chart import STRATEGIES, parse
from tiparse.grammar import Grammar, Nonterminal, Rule, Terminal
from tiparse.lexer import tokenize

from conftest import catalan, grammar_of


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario("untyped", 0)
    with pytest.raises(ValueError):
        Scenario("nope", 1)


def test_identical_copies_collapse():
    text = 'module Untyped { E ::= Id | "-" E; }'
    assert len(compose([text, text]).rules) == 2


def test_untyped_copies_are_suffixed():
    for k in (1, 2, 5):
        g = gen_scenario(Scenario("untyped", k)).grammar
        # E ::= Ei, Ei ::= Id, Ei ::= "-" E per copy, plus the identifier rule
        assert len(g.rules) == 3 * k + 1
    assert "E2 ::= Id" in untyped_module(2)


def test_typed_nonterminals():
    w = gen_scenario(Scenario("typed", 3))
    assert w.grammar.nonterminals == {"E", "V", "M1", "M2", "M3"}
    assert w.declares == [("A", "V")] and w.program == "--A" and w.top == "E"


def test_program_scaling_text():
    w = gen_scenario(Scenario("program-scaling-typed", 4))
    assert w.program == "A + A + A + A"
    assert w.declares == [("A", "Matrix")]
    assert gen_scenario(Scenario("program-scaling-untyped", 4)).declares == []


def test_untyped_program_tree_count():
    g = grammar_of('module M { E ::= Id | E "+" E; Id ::= #rx"^[A-Z]+$"; }')
    tokens, _ = tokenize("A + A + A + A", g)
    for strategy in STRATEGIES:
        assert len(parse(g, tokens, strategy, "E", gate=False).trees) == 5 == catalan(3)


@pytest.mark.parametrize("family", FAMILIES)
def test_every_family_parses_at_scale_one(family):
    # an undeclared A is an identifier in every semityped module
    expected = "ambiguous" if family == "semityped" else "ok"
    assert measure(Scenario(family, 1), "island").outcome == expected


def test_sparsity_trivial_cases():
    assert sparsity(Grammar([Rule(Nonterminal("S"), (Terminal("a"),))])) == 0
    assert sparsity(Grammar([Rule(Nonterminal("S"), (Nonterminal("S"), Terminal("a")))])) == 1
    with pytest.raises(ValueError):
        sparsity(Grammar([]))


def brute_sparsity(g):
    cells = [(n, r) for n in g.nonterminals for r in g.rules]
    return Fraction(sum(n in {s.name for s in r.rhs if hasattr(s, "name")} for n, r in cells),
                    len(cells))


@pytest.mark.parametrize("k", [1, 2, 3, 10, 25])
def test_typed_sparsity_is_one_over_k_plus_two(k):
    g = gen_scenario(Scenario("typed", k)).grammar
    assert sparsity(g) == brute_sparsity(g) == Fraction(1, k + 2)


@pytest.mark.xfail(strict=True, reason="sparsity(10) is exactly sparsity(2)/3, not below it")
def test_typed_sparsity_drops_by_more_than_three():
    s = {k: sparsity(gen_scenario(Scenario("typed", k)).grammar) for k in (2, 10)}
    assert s[10] < s[2] / 3


def test_run_suite_and_csv():
    rows = run_suite(["typed"], [1, 2], ["island", "earley_bu"])
    assert [(m.scenario.scale, m.strategy) for m in rows] == [
        (1, "island"), (1, "earley_bu"), (2, "island"), (2, "earley_bu")]
    assert all(m.items_generated > 0 and m.outcome == "ok" for m in rows)
    table = list(csv.reader(io.StringIO(to_csv(rows))))
    assert tuple(table[0]) == CSV_COLUMNS
    assert len(table) == 5
    assert to_tsv(rows).splitlines()[0].endswith("island\tearley_bu")


def test_budget_exceeded_is_recorded():
    m = measure(Scenario("untyped", 8), "earley_td", budget=100)
    assert m.outcome == "budget-exceeded"
    assert m.items_generated == 101


def test_untyped_program_scaling_is_ambiguous():
    assert measure(Scenario("program-scaling-untyped", 3), "island").outcome == "ambiguous"


def test_semityped_program_scaling_stays_polynomial():
    c = {n: measure(Scenario("program-scaling-semityped", n), "earley_bu").items_generated
         for n in (10, 20)}
    assert c[20] / c[10] < 5


@pytest.mark.xfail(strict=True, reason="eager priority gating keeps bottom-up polynomial here")
def test_semityped_bottom_up_does_the_most_work():
    s30 = Scenario("program-scaling-semityped", 30)
    w = gen_scenario(s30)
    c = {s: measure(s30, s, workload=w).items_generated for s in STRATEGIES}
    assert c["earley_bu"] > max(c["earley_td"], c["island"])
