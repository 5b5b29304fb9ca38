"""Deductive chart parsing: top-down Earley, bottom-up Earley and island parsing.

Every strategy is a set of deduction rules run to a fixpoint over one chart.
An item is either ``Complete(tree, i, j)`` (a token or a finished subtree
spanning ``i..j``) or ``Partial(rule, subst, dot_left, dot_right, children,
i, j)``, a rule instance whose symbols ``dot_left..dot_right-1`` have been
recognized as ``children``.  Top-down and bottom-up Earley keep
``dot_left == 0``; island parsing grows partials in both directions.

Rules per strategy (``Hyp`` seeds the tokens, ``Fnsh`` turns a fully-dotted
partial into a node, optionally gated by the priority-conflict check):

    earley_td   Init, Pred, Compl, Fnsh
    earley_bu   BU, Compl, Fnsh
    island      Islnd, IPred, RCompl, LCompl, Fnsh

Parameterized rules carry a substitution that grows through ``match``.
"""

from __future__ import annotations

import sys
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .disambig import attach_conflict, conflict
from .grammar import (GrammarError, Nonterminal, Scope, Terminal, TokenClass, Variable,
                      extend, specificity)
from .trees import Leaf, Node

STRATEGIES = ("earley_td", "earley_bu", "island")
DEFAULT_BUDGET = 10 ** 7


class ItemBudgetExceeded(Exception):
    def __init__(self, budget, items):
        self.budget, self.items = budget, items
        super().__init__("item budget of %d exceeded" % budget)


class UnknownNonterminal(GrammarError):
    pass


class Complete(NamedTuple):
    tree: object
    i: int
    j: int


class Partial(NamedTuple):
    rule: object
    subst: tuple
    dot_left: int
    dot_right: int
    children: tuple
    i: int
    j: int


# --------------------------------------------------------------------------
# Substitutions


def match(sym, y, subst, params, spec):
    """Match symbol ``sym`` against nonterminal ``y`` under ``subst``.

    Returns the (possibly extended) substitution as a sorted tuple of pairs,
    or ``None`` on failure.
    """
    if isinstance(sym, Variable) and sym.name in params:
        x = sym.name
        for k, (name, bound) in enumerate(subst):
            if name == x:
                if bound == y:
                    return subst
                joined = spec.lub(bound, y)
                if joined is None:
                    return None
                return subst[:k] + ((x, joined),) + subst[k + 1:]
        return tuple(sorted(subst + ((x, y),)))
    name = getattr(sym, "name", None)
    if name == y and not isinstance(sym, Scope):
        return subst
    return None


def apply_subst(subst, sym):
    """``subst`` applied to a symbol: variables it binds become nonterminals."""
    if isinstance(sym, Variable):
        for name, bound in subst:
            if name == sym.name:
                return Nonterminal(bound, sym.label)
    return sym


def _lookup(subst, name):
    for k, v in subst:
        if k == name:
            return v
    return None


# --------------------------------------------------------------------------
# Grammar indexes


class GrammarIndex:
    """Rule lookups the deduction rules need, computed once per grammar."""

    def __init__(self, g):
        self.grammar = g
        self.literals = g.literals
        self.spec = specificity(g)
        self.literal_rules = defaultdict(list)
        self.class_rules = []
        self.by_nt_pos = defaultdict(list)
        self.var_pos = []
        self.open_scope_pos = []
        self.first_terminal = defaultdict(list)
        self.first_class = []
        self.first_nt = defaultdict(list)
        self.first_var = []
        self.first_scope = []
        self.by_lhs = defaultdict(list)
        self.var_lhs = []
        for r in g.rules:
            if isinstance(r.lhs, Variable) and r.lhs.name in r.params:
                self.var_lhs.append(r)
            else:
                self.by_lhs[r.lhs.name].append(r)
            if r.is_literal:
                sym = r.rhs[0]
                if isinstance(sym, Terminal):
                    self.literal_rules[sym.text].append(r)
                else:
                    self.class_rules.append((sym, r))
            for pos, sym in enumerate(r.rhs):
                if isinstance(sym, Variable) and sym.name in r.params:
                    self.var_pos.append((r, pos))
                elif isinstance(sym, Nonterminal):
                    self.by_nt_pos[sym.name].append((r, pos))
                elif isinstance(sym, Scope) and not sym.decls:
                    self.open_scope_pos.append((r, pos))
            first = r.rhs[0] if r.rhs else None
            if isinstance(first, Terminal):
                self.first_terminal[first.text].append(r)
            elif isinstance(first, TokenClass):
                self.first_class.append((first, r))
            elif isinstance(first, Variable) and first.name in r.params:
                self.first_var.append(r)
            elif isinstance(first, Nonterminal):
                self.first_nt[first.name].append(r)
            elif isinstance(first, Scope):
                self.first_scope.append(r)

    def check_island(self):
        for r in self.grammar.rules:
            if len(r.rhs) > 1 and all(isinstance(s, (Terminal, TokenClass)) for s in r.rhs):
                raise GrammarError("island parsing needs single-token literal rules: %s" % r)


# --------------------------------------------------------------------------
# The chart


@dataclass
class ParseResult:
    trees: list
    items_generated: int
    strategy: str
    length: int
    chart: Optional["Chart"] = None
    header_tokens: int = 0
    metrics: dict = field(default_factory=dict)

    @property
    def outer_extent(self):
        """Extent of the whole form; for a declare form this includes header and brace."""
        if self.header_tokens:
            return (0, self.header_tokens + self.length + 1)
        return (0, self.length)

    @property
    def body_extent(self):
        return (self.header_tokens, self.header_tokens + self.length)


class Chart:
    def __init__(self, grammar, strategy, top=None, gate=True, budget=DEFAULT_BUDGET,
                 agenda="lifo", trace=None, opener=None):
        if strategy not in STRATEGIES:
            raise ValueError("unknown strategy %r" % strategy)
        self.grammar = grammar
        self.index = grammar.index
        if strategy == "island":
            self.index.check_island()
        self.strategy = strategy
        self.top = top
        self.gate = gate
        self.budget = budget
        self.lifo = agenda == "lifo"
        self.trace = trace
        self.opener = opener
        self.items = {}
        self.agenda = deque()
        self.items_generated = 0
        self.items_deduplicated = 0
        self.sub_items = 0
        self.by_start = defaultdict(list)
        self.by_end = defaultdict(list)
        self.wait_right = defaultdict(list)
        self.wait_left = defaultdict(list)

    # -- bookkeeping

    def add(self, item, how):
        if item in self.items:
            self.items_deduplicated += 1
            return
        self.items[item] = how
        self.items_generated += 1
        if self.items_generated > self.budget:
            raise ItemBudgetExceeded(self.budget, self.items_generated)
        self.agenda.append(item)
        if self.trace is not None:
            self.trace.write("%s %s\n" % (how, describe(item)))

    def keys(self):
        return frozenset(self.items)

    def run(self, tokens):
        leaves = []
        for k, tok in enumerate(tokens):
            leaf = Leaf(tok.text, tok.kind, tok.region)
            leaves.append(leaf)
            self.add(Complete(leaf, k, k + 1), "Hyp")
        n = len(tokens)
        if self.strategy == "earley_td" and n:
            self.init(0)
        pop = self.agenda.pop if self.lifo else self.agenda.popleft
        while self.agenda:
            item = pop()
            if len(item) == 3:
                self.on_complete(item)
            else:
                self.on_partial(item)
        return n

    def full_trees(self, n):
        out = []
        for item in self.items:
            if len(item) == 3 and item.i == 0 and item.j == n and isinstance(item.tree, Node):
                if self.top is None or item.tree.label == self.top:
                    out.append(item.tree)
        return out

    # -- deduction

    def init(self, j):
        idx = self.index
        if self.top is None:
            for r in self.grammar.rules:
                self.add(Partial(r, (), 0, 0, (), j, j), "Init")
            return
        for r in idx.by_lhs.get(self.top, ()):
            self.add(Partial(r, (), 0, 0, (), j, j), "Init")
        for r in idx.var_lhs:
            self.add(Partial(r, ((r.lhs.name, self.top),), 0, 0, (), j, j), "Init")

    def predict(self, sym, subst, j):
        idx = self.index
        if isinstance(sym, Variable):
            # even a bound variable can still widen through lub: predict every rule
            for r in self.grammar.rules:
                self.add(Partial(r, (), 0, 0, (), j, j), "Pred")
            return
        if isinstance(sym, Nonterminal):
            for r in idx.by_lhs.get(sym.name, ()):
                self.add(Partial(r, (), 0, 0, (), j, j), "Pred")
            for r in idx.var_lhs:
                self.add(Partial(r, ((r.lhs.name, sym.name),), 0, 0, (), j, j), "Pred")

    def on_complete(self, item):
        t, i, j = item
        self.by_start[i].append((t, j))
        self.by_end[j].append((t, i))
        strategy = self.strategy
        idx = self.index
        if isinstance(t, Leaf):
            if strategy == "island":
                self.islands(t, i, j)
            elif strategy == "earley_bu":
                self.bottom_up_leaf(t, i, j)
        elif strategy == "island":
            for r, pos in idx.by_nt_pos.get(t.label, ()):
                self.seed(r, (), pos, t, i, j, "IPred")
            for r, pos in idx.var_pos:
                s = match(r.rhs[pos], t.label, (), r.params, idx.spec)
                if s is not None:
                    self.seed(r, s, pos, t, i, j, "IPred")
        elif strategy == "earley_bu":
            for r in idx.first_nt.get(t.label, ()):
                self.seed(r, (), 0, t, i, j, "BU")
            for r in idx.first_var:
                s = match(r.rhs[0], t.label, (), r.params, idx.spec)
                if s is not None:
                    self.seed(r, s, 0, t, i, j, "BU")
        compl = "Compl" if strategy != "island" else "RCompl"
        for p in self.wait_right.get(i, ()):
            self.extend_right(p, t, j, compl)
        if strategy == "island":
            for p in self.wait_left.get(j, ()):
                self.extend_left(p, t, i)

    def islands(self, leaf, i, j):
        idx = self.index
        if leaf.region is not None:
            for r, pos in idx.open_scope_pos:
                for child, s in self.open(r, (), (), pos, pos, leaf):
                    self.seed(r, s, pos, child, i, j, "IPred")
            return
        for r in idx.literal_rules.get(leaf.text, ()):
            self.finish(r, (), (leaf,), i, j, "Islnd")
        if leaf.text not in idx.literals:
            for tc, r in idx.class_rules:
                if tc.matches(leaf.text):
                    self.finish(r, (), (leaf,), i, j, "Islnd")

    def bottom_up_leaf(self, leaf, i, j):
        idx = self.index
        if leaf.region is not None:
            for r in idx.first_scope:
                for child, s in self.open(r, (), (), 0, 0, leaf):
                    self.seed(r, s, 0, child, i, j, "BU")
            return
        for r in idx.first_terminal.get(leaf.text, ()):
            self.seed(r, (), 0, leaf, i, j, "BU")
        if leaf.text not in idx.literals:
            for tc, r in idx.first_class:
                if tc.matches(leaf.text):
                    self.seed(r, (), 0, leaf, i, j, "BU")

    def parent_label(self, rule, subst):
        lhs = rule.lhs
        if isinstance(lhs, Variable) and lhs.name in rule.params:
            return _lookup(subst, lhs.name)
        return lhs.name

    def seed(self, rule, subst, pos, child, i, j, how):
        if self.gate and attach_conflict(rule, self.parent_label(rule, subst), pos, child):
            return
        self.add(Partial(rule, subst, pos, pos + 1, (child,), i, j), how)

    def on_partial(self, p):
        rule = p.rule
        n = len(rule.rhs)
        if p.dot_left == 0 and p.dot_right == n:
            self.finish(rule, p.subst, p.children, p.i, p.j, "Fnsh")
            return
        j = p.j
        compl = "Compl" if self.strategy != "island" else "RCompl"
        if p.dot_right < n:
            self.wait_right[j].append(p)
            for t, k in list(self.by_start.get(j, ())):
                self.extend_right(p, t, k, compl)
            if self.strategy == "earley_td":
                self.predict(rule.rhs[p.dot_right], p.subst, j)
        if p.dot_left > 0 and self.strategy == "island":
            self.wait_left[p.i].append(p)
            for t, h in list(self.by_end.get(p.i, ())):
                self.extend_left(p, t, h)

    def finish(self, rule, subst, children, i, j, how):
        label = self.parent_label(rule, subst)
        if label is None:
            return
        node = Node(label, rule, children, subst)
        if self.gate and conflict(node):
            return
        self.add(Complete(node, i, j), how)

    def attach(self, p, pos, t):
        """Ways of putting tree ``t`` at RHS position ``pos`` of partial ``p``."""
        rule = p.rule
        sym = rule.rhs[pos]
        if isinstance(t, Leaf):
            if t.region is not None:
                if isinstance(sym, Scope):
                    return self.open(rule, p.subst, p.children, p.dot_left, pos, t)
                return ()
            if isinstance(sym, Terminal):
                return ((t, p.subst),) if sym.text == t.text else ()
            if isinstance(sym, TokenClass):
                if t.text not in self.index.literals and sym.matches(t.text):
                    return ((t, p.subst),)
            return ()
        if isinstance(sym, Nonterminal):
            s = p.subst if sym.name == t.label else None
        elif isinstance(sym, Variable):
            s = match(sym, t.label, p.subst, rule.params, self.index.spec)
        else:
            return ()
        if s is None:
            return ()
        if self.gate and attach_conflict(rule, self.parent_label(rule, s), pos, t):
            return ()
        return ((t, s),)

    def extend_right(self, p, t, k, how):
        for child, s in self.attach(p, p.dot_right, t):
            self.add(Partial(p.rule, s, p.dot_left, p.dot_right + 1, p.children + (child,),
                             p.i, k), how)

    def extend_left(self, p, t, h):
        for child, s in self.attach(p, p.dot_left - 1, t):
            self.add(Partial(p.rule, s, p.dot_left - 1, p.dot_right, (child,) + p.children,
                             h, p.j), "LCompl")

    def open(self, rule, subst, children, dot_left, pos, leaf):
        if self.opener is None:
            return ()
        return self.opener.open(self, rule, subst, children, dot_left, pos, leaf)


def describe(item):
    if len(item) == 3:
        t = item.tree
        body = t.text if isinstance(t, Leaf) else str(t)
        return "[%s] (%d,%d)" % (body, item.i, item.j)
    rule = item.rule
    syms = [str(s) for s in rule.rhs]
    done = [str(c) for c in item.children]
    text = " ".join(syms[:item.dot_left] + ["."] + done + ["."] + syms[item.dot_right:])
    sub = "" if not item.subst else "^{%s}" % ",".join("%s=%s" % kv for kv in item.subst)
    return "[%s ->%s %s] (%d,%d)" % (rule.lhs.name, sub, text, item.i, item.j)


# --------------------------------------------------------------------------
# Entry points


def parse(grammar, tokens, strategy="island", top=None, *, regions=None, gate=True,
          budget=DEFAULT_BUDGET, agenda="lifo", trace=None, opener=None):
    """Run ``strategy`` to a fixpoint and return the full-span trees labeled ``top``.

    ``top=None`` accepts a full-span tree of any label.  ``regions`` (from the
    lexer) enables phased parsing of brace-delimited regions.
    """
    if trace is True:
        trace = sys.stderr
    if opener is None and regions is not None:
        from .phases import RegionOpener
        opener = RegionOpener(regions, strategy=strategy, gate=gate, budget=budget,
                              agenda=agenda, trace=trace)
    chart = Chart(grammar, strategy, top, gate, budget, agenda, trace, opener)
    n = chart.run(tokens)
    trees = chart.full_trees(n) if n else []
    total = chart.items_generated + chart.sub_items
    return ParseResult(trees, total, strategy, n, chart,
                       metrics={"items": chart.items_generated, "sub_items": chart.sub_items,
                                "deduplicated": chart.items_deduplicated})


def declare_header_tokens(count):
    """Tokens in ``declare a1 : A1 , ... { `` for ``count`` bindings."""
    return 1 + 3 * count + (count - 1) + 1


def parse_with_declares(grammar, declares, tokens, strategy="island", top=None, **kw):
    """Parse the body of ``declare a1:A1, ... { body }``.

    Each binding ``a:A`` adds the rule ``A -> a`` for the body.  Extents in the
    result are relative to the body; ``outer_extent`` and ``body_extent``
    place them inside the whole declare form.
    """
    g = grammar
    for word, nt in declares:
        if nt not in g.nonterminals:
            raise UnknownNonterminal("declared type %r is not a nonterminal" % nt)
        g = extend(g, nt, word)
    result = parse(g, tokens, strategy, top, **kw)
    result.header_tokens = declare_header_tokens(len(declares)) if declares else 0
    return result


def count_items(result) -> int:
    return result.items_generated
