"""Grammars, symbols and rules.

A grammar is the usual 4-tuple of terminals, nonterminals, rules and a start
symbol, extended with the bits an extensible-syntax system needs: rule
parameters (``forall T. ...``), labeled symbols (``x:Int``), brace scopes,
associativity/precedence annotations, host-code actions and nonterminal to
host-type aliases.

Grammar values are immutable.  ``union`` and ``extend`` return new grammars.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Optional, Union


class GrammarError(Exception):
    """Raised for malformed grammar operations."""


class AliasConflict(GrammarError):
    pass


# --------------------------------------------------------------------------
# Symbols


@dataclass(frozen=True)
class Terminal:
    text: str
    label: Optional[str] = None

    def __str__(self):
        return _labeled(self.label, '"%s"' % escape(self.text))


@dataclass(frozen=True)
class TokenClass:
    """A terminal given by a regular expression, e.g. ``#rx"^[0-9]+$"``."""

    pattern: str
    label: Optional[str] = None

    @cached_property
    def regex(self):
        return re.compile(self.pattern)

    def matches(self, text: str) -> bool:
        return self.regex.fullmatch(text) is not None

    def __str__(self):
        return _labeled(self.label, '#rx"%s"' % escape(self.pattern))


@dataclass(frozen=True)
class Nonterminal:
    name: str
    label: Optional[str] = None

    def __str__(self):
        return _labeled(self.label, self.name)


@dataclass(frozen=True)
class Variable:
    """A rule parameter standing for any nonterminal."""

    name: str
    label: Optional[str] = None

    def __str__(self):
        return _labeled(self.label, self.name)


@dataclass(frozen=True)
class Scope:
    """A brace-delimited scoping construct ``"{" x:T1; z:T2 "}"``.

    ``decls`` pairs each binder label with the symbol it is declared at
    inside the braces; ``body`` is the symbol the region must parse as.
    """

    decls: tuple = ()
    body: Union[Nonterminal, Variable, None] = None
    label: Optional[str] = None

    def __str__(self):
        parts = ["%s:%s; " % (x, s.name) for x, s in self.decls]
        return '"{" %s%s "}"' % ("".join(parts), self.body)


Symbol = Union[Terminal, TokenClass, Nonterminal, Variable, Scope]


def escape(text):
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _labeled(label, text):
    return text if label is None else "%s:%s" % (label, text)


def unlabeled(sym):
    if getattr(sym, "label", None) is None:
        return sym
    return replace(sym, label=None)


def is_terminal(sym) -> bool:
    return isinstance(sym, (Terminal, TokenClass))


def is_phrase(sym) -> bool:
    """True for symbols that stand for a subtree (nonterminal, variable, scope)."""
    return isinstance(sym, (Nonterminal, Variable, Scope))


# --------------------------------------------------------------------------
# Rules


ASSOCIATIVITIES = ("left", "right", "non")


@dataclass(frozen=True)
class Annotation:
    """Associativity and precedence; ``None`` is the bottom element."""

    assoc: Optional[str] = None
    prec: Optional[int] = None

    def __post_init__(self):
        if self.assoc is not None and self.assoc not in ASSOCIATIVITIES:
            raise GrammarError("unknown associativity %r" % self.assoc)
        if self.prec is not None and self.prec < 0:
            raise GrammarError("precedence must be a natural number")

    def __bool__(self):
        return self.assoc is not None or self.prec is not None

    def __str__(self):
        parts = [p for p in (self.assoc, None if self.prec is None else str(self.prec)) if p]
        return "[%s]" % ",".join(parts) if parts else ""


NO_ANNOTATION = Annotation()


@dataclass(frozen=True)
class ActionSpec:
    kind: str  # "function" (=>) or "macro" (=)
    body: str

    def __post_init__(self):
        if self.kind not in ("function", "macro"):
            raise GrammarError("action kind must be 'function' or 'macro'")

    @property
    def operator(self):
        return "=>" if self.kind == "function" else "="


@dataclass(frozen=True)
class Rule:
    lhs: Union[Nonterminal, Variable]
    rhs: tuple
    params: tuple = ()
    annotation: Annotation = NO_ANNOTATION
    action: Optional[ActionSpec] = None
    # provenance only; two rules equal in everything else are the same rule
    module: Optional[str] = field(default=None, compare=False)
    source: Optional[tuple] = field(default=None, compare=False)  # (path, line, column)

    @property
    def location(self) -> str:
        if self.source is None:
            return "<unknown>"
        path, line, col = self.source
        return "%s:%d:%d" % (path or "<input>", line, col)

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))
        object.__setattr__(self, "params", tuple(self.params))

    @cached_property
    def _hash(self):
        return hash((self.lhs, self.rhs, self.params, self.annotation, self.action))

    def __hash__(self):
        return self._hash

    @property
    def is_literal(self) -> bool:
        return len(self.rhs) == 1 and is_terminal(self.rhs[0])

    @property
    def is_unit(self) -> bool:
        return len(self.rhs) == 1 and isinstance(self.rhs[0], (Nonterminal, Variable))

    def nonterminal_names(self):
        """Names of the concrete nonterminals mentioned anywhere in the rule."""
        out = []
        for sym in (self.lhs,) + self.rhs:
            if isinstance(sym, Nonterminal):
                out.append(sym.name)
            elif isinstance(sym, Scope):
                out.extend(s.name for _, s in sym.decls if isinstance(s, Nonterminal))
                if isinstance(sym.body, Nonterminal):
                    out.append(sym.body.name)
        return out

    def __str__(self):
        head = "forall %s. " % " ".join(self.params) if self.params else ""
        text = "%s%s ::= %s" % (head, self.lhs.name, " ".join(map(str, self.rhs)))
        if self.annotation:
            text += " " + str(self.annotation)
        if self.action is not None:
            text += " %s %s" % (self.action.operator, self.action.body)
        return text


# --------------------------------------------------------------------------
# Grammars


class Grammar:
    """An immutable grammar.  Rules keep first-insertion order; duplicates collapse."""

    def __init__(self, rules: Iterable[Rule] = (), start: Optional[str] = None,
                 type_aliases: Optional[dict] = None, nonterminals: Iterable[str] = ()):
        self.rules = tuple(dict.fromkeys(rules))
        self.type_aliases = dict(type_aliases or {})
        names = set(nonterminals)
        for r in self.rules:
            names.update(r.nonterminal_names())
        if start is None and self.rules and isinstance(self.rules[0].lhs, Nonterminal):
            start = self.rules[0].lhs.name
        if start is not None:
            names.add(start)
        self.nonterminals = frozenset(names)
        self.start = start

    @cached_property
    def terminals(self) -> frozenset:
        out = set()
        for r in self.rules:
            for sym in r.rhs:
                if is_terminal(sym):
                    out.add(unlabeled(sym))
        return frozenset(out)

    @cached_property
    def literals(self) -> frozenset:
        return frozenset(t.text for t in self.terminals if isinstance(t, Terminal))

    @cached_property
    def token_classes(self) -> tuple:
        return tuple(sorted({t for t in self.terminals if isinstance(t, TokenClass)},
                            key=lambda t: t.pattern))

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return (set(self.rules) == set(other.rules) and self.start == other.start
                and self.type_aliases == other.type_aliases
                and self.nonterminals == other.nonterminals)

    def __hash__(self):
        return hash((frozenset(self.rules), self.start))

    def __len__(self):
        return len(self.rules)

    def __repr__(self):
        return "<Grammar %d rules, start=%s>" % (len(self.rules), self.start)

    def __str__(self):
        lines = ["%s = %s;" % kv for kv in self.type_aliases.items()]
        lines += [str(r) + ";" for r in self.rules]
        return "\n".join(lines)

    # the compiled indexes used by the chart engine are cached per grammar
    @cached_property
    def index(self):
        from .chart import GrammarIndex
        return GrammarIndex(self)


def union(g1: Grammar, g2: Grammar) -> Grammar:
    """Component-wise union; the start symbol comes from ``g1``."""
    aliases = dict(g1.type_aliases)
    for name, text in g2.type_aliases.items():
        if name in aliases and aliases[name] != text:
            raise AliasConflict("%s is aliased to both %r and %r" % (name, aliases[name], text))
        aliases[name] = text
    return Grammar(g1.rules + g2.rules, start=g1.start if g1.start else g2.start,
                   type_aliases=aliases, nonterminals=g1.nonterminals | g2.nonterminals)


def union_all(grammars: Iterable[Grammar]) -> Grammar:
    out = Grammar()
    for g in grammars:
        out = union(out, g)
    return out


def extend(g: Grammar, lhs: str, word: str) -> Grammar:
    """``g`` plus the literal rule ``lhs -> word``."""
    if lhs not in g.nonterminals:
        raise GrammarError("unknown nonterminal %r" % lhs)
    rule = Rule(Nonterminal(lhs), (Terminal(word),))
    if rule in g.rules:
        return g
    return Grammar(g.rules + (rule,), start=g.start, type_aliases=g.type_aliases,
                   nonterminals=g.nonterminals)


# --------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    rule: Optional[Rule] = None


@dataclass
class ValidationReport:
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.errors

    def codes(self):
        return [d.code for d in self.errors]


def _balanced(text: str) -> bool:
    depth = 0
    in_string = False
    escaped = False
    for ch in text:
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0 and not in_string


def _symbol_vars(sym):
    if isinstance(sym, Variable):
        yield sym.name
    elif isinstance(sym, Scope):
        for _, s in sym.decls:
            yield from _symbol_vars(s)
        if sym.body is not None:
            yield from _symbol_vars(sym.body)


def _rule_labels(rule):
    for sym in rule.rhs:
        if isinstance(sym, Scope):
            if sym.body is not None and sym.body.label is not None:
                yield sym.body.label
        elif sym.label is not None:
            yield sym.label


def validate(g: Grammar) -> ValidationReport:
    report = ValidationReport()
    err = report.errors.append
    for r in g.rules:
        if len(set(r.params)) != len(r.params):
            err(Diagnostic("DuplicateParameter", "duplicate parameter in %s" % r, r))
        used = set(_symbol_vars(r.lhs))
        for sym in r.rhs:
            used.update(_symbol_vars(sym))
        for name in sorted(used - set(r.params)):
            err(Diagnostic("UnboundVariable", "%s is not a parameter of %s" % (name, r), r))
        if not r.rhs:
            err(Diagnostic("EmptyRule", "empty right-hand side in %s" % r, r))
        elif not any(is_phrase(s) for s in r.rhs) and len(r.rhs) > 1:
            err(Diagnostic("MultiTokenLiteral",
                           "a rule without nonterminals may contain only one terminal: %s" % r, r))
        for sym in r.rhs:
            if isinstance(sym, Terminal) and not sym.text:
                err(Diagnostic("EmptyTerminal", "empty literal in %s" % r, r))
            if isinstance(sym, Scope):
                bound = {s.label for s in r.rhs if not isinstance(s, Scope)}
                for x, _ in sym.decls:
                    if x not in bound:
                        err(Diagnostic("UnboundLabel", "scope declares %s which is not captured" % x, r))
        labels = list(_rule_labels(r))
        if len(set(labels)) != len(labels):
            err(Diagnostic("DuplicateLabel", "labels repeated in %s" % r, r))
        if r.action is not None and not _balanced(r.action.body):
            err(Diagnostic("UnbalancedAction", "unbalanced parentheses in action of %s" % r, r))

    # a terminal is suspect when it only ever becomes a nonterminal that is never
    # used as an operand
    operands = set()
    for r in g.rules:
        if r.is_unit:
            continue
        for sym in r.rhs:
            if isinstance(sym, Nonterminal):
                operands.add(sym.name)
            elif isinstance(sym, Scope) and isinstance(sym.body, Nonterminal):
                operands.add(sym.body.name)
    for r in g.rules:
        if r.is_literal and isinstance(r.lhs, Nonterminal) and r.lhs.name not in operands:
            report.warnings.append(Diagnostic(
                "IllTypedTerminal",
                "%s is produced by %s, which is never an operand" % (r.rhs[0], r.lhs.name), r))
    return report


# --------------------------------------------------------------------------
# Specificity


class SpecificityRelation:
    """``geq(A, B)``: A is at least as specific as B.

    Unit rules ``B ::= A`` make ``A >= B``; the relation is the reflexive
    transitive closure of those edges.  Nonterminals on a unit cycle form one
    equivalence class.
    """

    def __init__(self, nonterminals, edges):
        self.nonterminals = frozenset(nonterminals)
        above = {n: {n} for n in self.nonterminals}
        succ = {}
        for a, b in edges:
            above.setdefault(a, {a})
            above.setdefault(b, {b})
            succ.setdefault(a, set()).add(b)
        # above[a] = every b with a >= b
        for a in list(above):
            seen = {a}
            stack = [a]
            while stack:
                x = stack.pop()
                for y in succ.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            above[a] = seen
        self._below = above

    def geq(self, a: str, b: str) -> bool:
        if a == b:
            return True
        return b in self._below.get(a, ())

    def pairs(self):
        return {(a, b) for a, bs in self._below.items() for b in bs}

    def lub(self, a: str, b: str) -> Optional[str]:
        """The most specific C with ``a >= C`` and ``b >= C``, if unique."""
        if a == b:
            return a
        common = self._below.get(a, {a}) & self._below.get(b, {b})
        least = [c for c in common if all(self.geq(c, d) for d in common)]
        if not least:
            return None
        # members of one equivalence class are interchangeable; pick deterministically
        return min(least)


def specificity(g: Grammar) -> SpecificityRelation:
    edges = []
    for r in g.rules:
        if r.is_unit and isinstance(r.lhs, Nonterminal) and isinstance(r.rhs[0], Nonterminal):
            edges.append((r.rhs[0].name, r.lhs.name))
    return SpecificityRelation(g.nonterminals, edges)
