"""Phased parsing of brace-delimited regions with binder scoping.

The first phase parses the program with every ``{ ... }`` region collapsed
to a placeholder token.  When a partial item around a region has captured
every label its scope declares, the region is opened: the grammar is
extended with ``T -> "x"`` for each declaration ``x:T`` (``T`` instantiated
through the item's substitution, ``x`` replaced by the captured text), the
region is parsed in its own chart, and each of its full-span trees is
spliced back into the surrounding item.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chart import DEFAULT_BUDGET, match, parse
from .grammar import GrammarError, Scope, Variable, extend
from .trees import RegionNode, tree_yield


class UnboundLabel(GrammarError):
    pass


class RegionNeverOpened(Exception):
    pass


@dataclass
class PhasePlan:
    """Record of the regions opened during a parse, in opening order."""

    steps: list = field(default_factory=list)  # (region id, all bindings in force, body symbol)

    def phases(self, regions):
        return 1 + max((regions.depth(rid) for rid, _, _ in self.steps), default=0)


def instantiate_scope(rule, subst, captured, scope=None):
    """The unit rules ``sigma(T) -> captured[x]`` declared by ``rule``'s scope."""
    if scope is None:
        scope = next(s for s in rule.rhs if isinstance(s, Scope))
    out = []
    sub = dict(subst)
    for x, sym in scope.decls:
        if x not in captured:
            raise UnboundLabel("label %s of %s has not been captured" % (x, rule))
        if isinstance(sym, Variable) and sym.name in rule.params:
            if sym.name not in sub:
                raise UnboundLabel("type %s of %s is not yet instantiated" % (sym.name, x))
            nt = sub[sym.name]
        else:
            nt = sym.name
        out.append((nt, captured[x]))
    return out


def captured_labels(rule, children, dot_left):
    out = {}
    for k, child in enumerate(children):
        sym = rule.rhs[dot_left + k]
        label = getattr(sym, "label", None)
        if label is not None and not isinstance(sym, Scope):
            out[label] = " ".join(tree_yield(child))
    return out


class RegionOpener:
    def __init__(self, regions, strategy="island", gate=True, budget=DEFAULT_BUDGET,
                 agenda="lifo", trace=None, bindings=(), cache=None, plan=None):
        self.regions = regions
        self.strategy = strategy
        self.gate = gate
        self.budget = budget
        self.agenda = agenda
        self.trace = trace
        self.bindings = tuple(bindings)
        self.cache = {} if cache is None else cache
        self.plan = PhasePlan() if plan is None else plan
        self.opened = set()

    def open(self, chart, rule, subst, children, dot_left, pos, leaf):
        scope = rule.rhs[pos]
        captured = captured_labels(rule, children, dot_left)
        if any(x not in captured for x, _ in scope.decls):
            return ()
        try:
            new = instantiate_scope(rule, subst, captured, scope)
        except UnboundLabel:
            return ()
        g = chart.grammar
        for nt, word in new:
            if nt not in g.nonterminals:
                return ()
            g = extend(g, nt, word)
        rid = leaf.region
        key = (rid, self.bindings + tuple(new))
        if key not in self.cache:
            self.plan.steps.append((rid, key[1], scope.body))
            inner = RegionOpener(self.regions, self.strategy, self.gate, self.budget,
                                 self.agenda, self.trace, key[1], self.cache, self.plan)
            result = parse(g, self.regions[rid].tokens, self.strategy, None, gate=self.gate,
                           budget=self.budget, agenda=self.agenda, trace=self.trace,
                           opener=inner)
            self.cache[key] = (result.trees, result.items_generated)
            chart.sub_items += result.items_generated
        self.opened.add(rid)
        trees, _ = self.cache[key]
        out = []
        for t in trees:
            s = match(scope.body, t.label, subst, rule.params, chart.index.spec)
            if s is not None:
                out.append((RegionNode(rid, t), s))
        return out


def phased_parse(grammar, tokens, regions, strategy="island", top=None, **kw):
    """Parse ``tokens`` whose regions are opened on demand; see the module docstring."""
    opener = RegionOpener(regions, strategy=strategy, gate=kw.get("gate", True),
                          budget=kw.get("budget", DEFAULT_BUDGET),
                          agenda=kw.get("agenda", "lifo"), trace=kw.get("trace"))
    result = parse(grammar, tokens, strategy, top, opener=opener, **kw)
    result.metrics["plan"] = opener.plan
    result.metrics["opened"] = opener.opened
    if not result.trees:
        never = [t for t in tokens if t.kind == "region" and t.region not in opener.opened]
        if never:
            tok = never[0]
            result.metrics["never_opened"] = [t.region for t in never]
            result.metrics["diagnostic"] = (
                "region at line %d, column %d was never opened" % (tok.line, tok.column))
    return result
