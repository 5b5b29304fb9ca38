"""Translation of grammars and parse trees to Typed Racket text.

Aliases become ``define-type`` forms, rule-functions typed ``lambda``
definitions and rule-macros ``syntax-rules`` macros.  A parse tree turns into
nested applications of the generated names to the translations of its
labeled children; terminals translate to themselves and action-less unit
rules (coercions) disappear.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .grammar import Nonterminal, Scope, Variable
from .trees import Leaf, Node, RegionNode


class MissingAction(Exception):
    def __init__(self, message, rule=None):
        super().__init__(message)
        self.rule = rule


def supp(alpha):
    """Labels bound in the symbol sequence ``alpha``, in order."""
    return [x for x, _ in binders(alpha)]


def binders(alpha):
    """``(label, symbol)`` for each labeled symbol of ``alpha``, in order."""
    out = []
    for sym in alpha:
        if isinstance(sym, Scope):
            if sym.body is not None and sym.body.label is not None:
                out.append((sym.body.label, type(sym.body)(sym.body.name)))
        elif getattr(sym, "label", None) is not None:
            out.append((sym.label, _strip(sym)))
    return out


def _strip(sym):
    if isinstance(sym, (Nonterminal, Variable)):
        return type(sym)(sym.name)
    return sym


def _binder_positions(rule):
    out = []
    for pos, sym in enumerate(rule.rhs):
        if isinstance(sym, Scope):
            if sym.body is not None and sym.body.label is not None:
                out.append(pos)
        elif getattr(sym, "label", None) is not None:
            out.append(pos)
    return out


_SPACE_OR_STRING = re.compile(r'"(?:[^"\\]|\\.)*"|\s+')


def normalize(text):
    """Collapse whitespace runs outside string literals to one space."""
    return _SPACE_OR_STRING.sub(lambda m: m.group() if m.group().startswith('"') else " ",
                                text).strip()


def rule_names(g):
    """``f_<module>_<i>`` / ``m_<module>_<i>`` per action rule, ``i`` counting the module's rules."""
    names = {}
    counters = {}
    for r in g.rules:
        module = r.module or "main"
        k = counters.get(module, 0)
        counters[module] = k + 1
        if r.action is not None:
            prefix = "f" if r.action.kind == "function" else "m"
            names[r] = "%s_%s_%d" % (prefix, module, k)
    return names


def _symbol_type(sym):
    return sym.name if hasattr(sym, "name") else str(sym)


def emit_definitions(g, names=None):
    names = rule_names(g) if names is None else names
    out = ["(define-type %s %s)" % (a, normalize(t)) for a, t in g.type_aliases.items()]
    for r in g.rules:
        if r.action is None:
            continue
        name = names[r]
        args = " ".join(supp(r.rhs))
        body = normalize(r.action.body)
        if r.action.kind == "function":
            arrow = "(%s -> %s)" % (" ".join(_symbol_type(s) for _, s in binders(r.rhs)),
                                    r.lhs.name)
            if arrow.startswith("( "):
                arrow = "(" + arrow[2:]
            if r.params:
                arrow = "(All (%s) %s)" % (" ".join(r.params), arrow)
            out.append("(: %s %s)" % (name, arrow))
            out.append("(define %s (lambda (%s) %s))" % (name, args, body))
        else:
            pattern = " ".join([name] + list(r.params) + supp(r.rhs))
            out.append("(define-syntax %s (syntax-rules () ((%s) %s)))" % (name, pattern, body))
    return out


def translate(t, names) -> str:
    if isinstance(t, Leaf):
        return t.text
    if isinstance(t, RegionNode):
        return translate(t.body, names)
    rule = t.rule
    if rule.action is None:
        if len(t.children) == 1:
            # token/literal rule, or a coercion that erases to its operand
            return translate(t.children[0], names)
        raise MissingAction("no action for %s" % rule, rule)
    args = [translate(t.children[p], names) for p in _binder_positions(rule)]
    if rule.action.kind == "macro":
        sub = dict(t.inst)
        missing = [x for x in rule.params if x not in sub]
        if missing:
            raise MissingAction("parameters %s of %s are uninstantiated" % (missing, rule), rule)
        args = [sub[x] for x in rule.params] + args
    return "(%s)" % " ".join([names[rule]] + args)


def check_actions(g):
    """Rules that would make ``translate`` fail: non-unit, non-token rules without actions."""
    return [r for r in g.rules if r.action is None and len(r.rhs) != 1]


@dataclass
class EmittedProgram:
    prelude: list = field(default_factory=list)
    body: str = ""

    def text(self):
        lines = ["#lang typed/racket"] + self.prelude
        lines.append("(define (main) %s)" % self.body)
        lines.append("(provide main)")
        return "\n".join(lines) + "\n"


def emit_program(g, tree) -> EmittedProgram:
    names = rule_names(g)
    return EmittedProgram(emit_definitions(g, names), translate(tree, names))
