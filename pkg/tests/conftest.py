"""Oracles and helpers shared by the test modules.

The oracles here never call into the chart engine: ``brute_trees`` derives
every parse tree by recursive descent over all ways of splitting the input,
and ``cyk_count`` counts bracketings with a textbook CYK recurrence.
"""

import random
import sys
from functools import lru_cache
from pathlib import Path

import pytest

from tiparse.grammar import Annotation, Grammar, Nonterminal, Rule, Terminal
from tiparse.lexer import Token
from tiparse.reader import CORPUS_DIR, ModuleLoader, read_modules
from tiparse.trees import Leaf, Node

TESTS = Path(__file__).parent
GOLDEN = TESTS / "golden"

sys.setrecursionlimit(10000)


def toks(words):
    """Literal tokens for a list of texts (no lexer involved)."""
    if isinstance(words, str):
        words = words.split()
    return [Token(w, "literal", (k, k + 1), k, 1, k + 1) for k, w in enumerate(words)]


def grammar_of(text):
    """Union of every module in ``text``."""
    from tiparse.grammar import union_all
    return union_all(g for _, g in read_modules(text).module_defs)


def corpus_grammar(*names, subdir=None):
    path = [CORPUS_DIR / subdir] if subdir else []
    return ModuleLoader(path).compose(names)


def corpus_text(rel):
    return (CORPUS_DIR / rel).read_text(encoding="utf-8")


# --------------------------------------------------------------------------
# Brute-force oracles


def brute_trees(g, words, top=None):
    """Every full-span parse tree of ``words``, found by exhaustive splitting.

    Handles literal terminals and acyclic unit rules; no parameters,
    scopes or token classes.
    """
    if isinstance(words, str):
        words = words.split()
    words = tuple(words)
    n = len(words)
    by_lhs = {}
    for r in g.rules:
        by_lhs.setdefault(r.lhs.name, []).append(r)

    @lru_cache(maxsize=None)
    def derive(name, i, j):
        out = []
        for r in by_lhs.get(name, ()):
            for kids in seqs(r.rhs, 0, i, j):
                out.append(Node(name, r, kids))
        return tuple(out)

    def seqs(rhs, k, i, j):
        if k == len(rhs):
            if i == j:
                yield ()
            return
        rest = len(rhs) - k - 1
        sym = rhs[k]
        for m in range(i + 1, j - rest + 1):
            if isinstance(sym, Terminal):
                found = (Leaf(words[i]),) if m == i + 1 and words[i] == sym.text else ()
            else:
                found = derive(sym.name, i, m)
            for t in found:
                for tail in seqs(rhs, k + 1, m, j):
                    yield (t,) + tail

    names = [top] if top else sorted(g.nonterminals)
    return {t for name in names for t in derive(name, 0, n)}


def cyk_count(words, operator="+"):
    """Bracketings of ``x op x op ... x`` under ``E -> x | E op E`` (CYK recurrence)."""
    n = len(words)
    count = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        count[i][i + 1] = 1 if words[i] != operator else 0
    for width in range(2, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            count[i][j] = sum(count[i][k] * count[k + 1][j]
                              for k in range(i + 1, j - 1) if words[k] == operator)
    return count[0][n]


def catalan(n):
    from math import comb
    return comb(2 * n, n) // (n + 1)


# --------------------------------------------------------------------------
# Random grammars


NTS = ("S", "A", "B", "C")
TERMS = ("a", "b", "c", "+")


def random_grammar(rng, max_rules=8, annotate=False):
    """A small random grammar: no parameters, no unit cycles, no multi-terminal rules."""
    rules = []
    # two slots are kept for the terminal rules added below
    for _ in range(rng.randint(2, max_rules - 2)):
        lhs = rng.randrange(len(NTS))
        size = rng.randint(1, 3)
        rhs = []
        for _ in range(size):
            if rng.random() < 0.5:
                rhs.append(Nonterminal(rng.choice(NTS)))
            else:
                rhs.append(Terminal(rng.choice(TERMS)))
        if size > 1 and all(isinstance(s, Terminal) for s in rhs):
            rhs[rng.randrange(size)] = Nonterminal(rng.choice(NTS))
        if size == 1 and isinstance(rhs[0], Nonterminal):
            # unit rules only point down the NTS order, so they never cycle
            if lhs == len(NTS) - 1:
                rhs = [Terminal(rng.choice(TERMS))]
            else:
                rhs = [Nonterminal(NTS[rng.randint(lhs + 1, len(NTS) - 1)])]
        ann = Annotation()
        if annotate and size > 1 and rng.random() < 0.7:
            assoc = rng.choice((None, "left", "right", "non"))
            prec = rng.choice((None, 1, 2, 3))
            ann = Annotation(assoc, prec)
        rules.append(Rule(Nonterminal(NTS[lhs]), tuple(rhs), annotation=ann))
    # make sure every terminal of the input alphabet can be consumed somewhere
    for t in ("a", "b"):
        rules.append(Rule(Nonterminal(rng.choice(NTS)), (Terminal(t),)))
    return Grammar(rules, start="S")


def random_input(rng, max_len=10):
    return [rng.choice(TERMS) for _ in range(rng.randint(1, max_len))]


def sentence_of(g, rng, max_depth=5):
    """A random word derivable from ``S`` (falls back to None if none is found)."""
    by_lhs = {}
    for r in g.rules:
        by_lhs.setdefault(r.lhs.name, []).append(r)

    def gen(name, depth):
        options = by_lhs.get(name, [])
        if depth <= 0:
            options = [r for r in options if all(isinstance(s, Terminal) for s in r.rhs)]
        if not options:
            return None
        r = rng.choice(options)
        out = []
        for s in r.rhs:
            if isinstance(s, Terminal):
                out.append(s.text)
            else:
                sub = gen(s.name, depth - 1)
                if sub is None:
                    return None
                out.extend(sub)
        return out

    for _ in range(20):
        w = gen("S", max_depth)
        if w and len(w) <= 10:
            return w
    return None


def random_pair(seed, annotate=False):
    """A random grammar with an input that is derivable from it about half the time."""
    rng = random.Random(seed)
    g = random_grammar(rng, annotate=annotate)
    w = sentence_of(g, rng) if rng.random() < 0.6 else None
    return g, (w or random_input(rng))


@pytest.fixture
def ml():
    return corpus_grammar("ML")
