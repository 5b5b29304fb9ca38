"""Reader for ``.es`` source files.

A file holds ``module NAME { ... }`` blocks, ``import A, B;`` lines, and then
the program body (everything after the last import or module).  Inside a
module::

    // type aliases
    Int = Integer;
    // rules, with |-separated alternatives
    Matrix ::= Matrix "+" Matrix [left,1] | Matrix "*" Matrix [left,2];
    // parameters, labels, scopes and actions
    forall T1 T2.
      T2 ::= "let" x:Id "=" y:T1 "{" x:T1; z:T2 "}" = (let: ([x : T1 y]) z);
    // token classes
    Int ::= #rx"^[0-9]+$";

``=>`` introduces a function action and ``=`` a macro action; the action
text runs to the first ``;`` outside parentheses and strings.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .grammar import (ActionSpec, Annotation, Grammar, NO_ANNOTATION, Nonterminal, Rule,
                      Scope, Terminal, TokenClass, Variable, union_all)

KEYWORDS = frozenset({"module", "import", "declare", "forall"})
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"[0-9]+")
_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


class ReaderError(Exception):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = "" if line is None else "%d:%d: " % (line, column)
        super().__init__(where + message)


@dataclass
class SourceFile:
    module_defs: list = field(default_factory=list)
    imports: list = field(default_factory=list)
    program_body: str = ""
    body_offset: int = 0
    path: str | None = None

    def module(self, name):
        for n, g in self.module_defs:
            if n == name:
                return g
        raise KeyError(name)


@dataclass
class DeclareHeader:
    bindings: list
    body: str
    body_span: tuple
    header_tokens: int


class _Cursor:
    def __init__(self, text, pos=0):
        self.text = text
        self.pos = pos

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message, pos=None):
        return ReaderError(message, *self.where(pos))

    def skip(self):
        text = self.text
        while self.pos < len(text):
            if text[self.pos].isspace():
                self.pos += 1
            elif text.startswith("//", self.pos):
                nl = text.find("\n", self.pos)
                self.pos = len(text) if nl < 0 else nl + 1
            else:
                break

    def at(self, s):
        self.skip()
        return self.text.startswith(s, self.pos)

    def at_word(self, word):
        self.skip()
        m = _NAME.match(self.text, self.pos)
        return m is not None and m.group() == word

    def eat(self, s):
        if self.at(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s):
        if not self.eat(s):
            found = self.text[self.pos:self.pos + 10] or "end of input"
            raise self.error("expected %r, found %r" % (s, found))

    def name(self, what="name"):
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise self.error("expected %s" % what)
        self.pos = m.end()
        return m.group()

    def ident(self, what="identifier"):
        start = self.pos
        n = self.name(what)
        if n in KEYWORDS:
            raise self.error("%r is reserved" % n, start)
        return n

    def string(self):
        """A double-quoted literal starting at the cursor, unescaped."""
        self.skip()
        start = self.pos
        if self.text[self.pos:self.pos + 1] != '"':
            raise self.error("expected string literal")
        out = []
        k = self.pos + 1
        while True:
            if k >= len(self.text):
                raise self.error("unterminated string", start)
            ch = self.text[k]
            if ch == '"':
                break
            if ch == "\\":
                esc = self.text[k + 1:k + 2]
                if esc not in _ESCAPES:
                    raise self.error("unknown escape \\%s" % esc, k)
                out.append(_ESCAPES[esc])
                k += 2
                continue
            out.append(ch)
            k += 1
        self.pos = k + 1
        return "".join(out)

    def host_text(self):
        """Raw host code up to the first ``;`` at parenthesis depth zero."""
        self.skip()
        start = k = self.pos
        depth = 0
        text = self.text
        while k < len(text):
            ch = text[k]
            if ch == '"':
                k += 1
                while k < len(text) and text[k] != '"':
                    k += 2 if text[k] == "\\" else 1
            elif ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
                if depth < 0:
                    raise self.error("unbalanced ')' in host code", k)
            elif ch == ";" and depth == 0:
                self.pos = k + 1
                return text[start:k].strip()
            k += 1
        raise self.error("host code is not terminated by ';'", start)


# --------------------------------------------------------------------------
# Modules


def _symbol(cur, params):
    cur.skip()
    if cur.at("#rx"):
        cur.pos += 3
        return TokenClass(cur.string())
    if cur.at('"'):
        return Terminal(cur.string())
    name = cur.ident("symbol")
    if cur.at(":") and not cur.at("::="):
        cur.pos += 1
        inner = _symbol(cur, params)
        if getattr(inner, "label", None) is not None or isinstance(inner, Scope):
            raise cur.error("a symbol takes at most one label")
        return type(inner)(**{**_fields(inner), "label": name})
    return Variable(name) if name in params else Nonterminal(name)


def _fields(sym):
    if isinstance(sym, TokenClass):
        return {"pattern": sym.pattern}
    if isinstance(sym, Terminal):
        return {"text": sym.text}
    return {"name": sym.name}


def _scope(cur, params):
    decls = []
    while True:
        start = cur.pos
        sym = _symbol(cur, params)
        if cur.eat(";"):
            if sym.label is None or not isinstance(sym, (Nonterminal, Variable)):
                raise cur.error("scope declarations have the form x:T", start)
            decls.append((sym.label, type(sym)(sym.name)))
            continue
        if not isinstance(sym, (Nonterminal, Variable)):
            raise cur.error("scope body must be a nonterminal", start)
        if cur.string() != "}":
            raise cur.error('expected "}" closing the scope')
        return Scope(tuple(decls), sym)


def _alternative(cur, lhs, params, module, path=None):
    cur.skip()
    source = (path,) + cur.where()
    rhs = []
    while True:
        cur.skip()
        if cur.at("|") or cur.at(";") or cur.at("[") or cur.at("=>") or cur.at("="):
            break
        if cur.pos >= len(cur.text):
            raise cur.error("unexpected end of input in rule")
        if cur.at('"{"'):
            cur.pos += 3
            rhs.append(_scope(cur, params))
            continue
        rhs.append(_symbol(cur, params))
    ann = NO_ANNOTATION
    if cur.eat("["):
        assoc = prec = None
        cur.skip()
        m = _NAME.match(cur.text, cur.pos)
        if m:
            at = cur.pos
            assoc = cur.name()
            if assoc not in ("left", "right", "non"):
                raise cur.error("unknown associativity %r" % assoc, at)
            if cur.eat(","):
                cur.skip()
                m = _INT.match(cur.text, cur.pos)
                if not m:
                    raise cur.error("expected precedence")
                prec = int(m.group())
                cur.pos = m.end()
        else:
            m = _INT.match(cur.text, cur.pos)
            if not m:
                raise cur.error("expected associativity or precedence")
            prec = int(m.group())
            cur.pos = m.end()
        cur.expect("]")
        ann = Annotation(assoc, prec)
    action = None
    if cur.eat("=>"):
        action = ActionSpec("function", cur.host_text())
        cur.pos -= 1  # leave the ';' for the caller
    elif cur.eat("="):
        action = ActionSpec("macro", cur.host_text())
        cur.pos -= 1
    if not rhs:
        raise cur.error("empty alternative")
    return Rule(lhs, tuple(rhs), params, ann, action, module=module, source=source)


def _module_body(cur, name, path=None):
    rules, aliases = [], {}
    while not cur.eat("}"):
        if cur.pos >= len(cur.text):
            raise cur.error("unbalanced braces: module %s is not closed" % name)
        params = ()
        if cur.at_word("forall"):
            cur.name()
            ps = []
            while not cur.eat("."):
                ps.append(cur.ident("parameter"))
            params = tuple(ps)
        start = cur.pos
        head = cur.ident("nonterminal")
        if cur.eat("::="):
            lhs = Variable(head) if head in params else Nonterminal(head)
            while True:
                rules.append(_alternative(cur, lhs, params, name, path))
                if cur.eat(";"):
                    break
                cur.expect("|")
        elif not params and cur.eat("="):
            aliases[head] = cur.host_text()
        else:
            raise cur.error("expected '::=' or '='", start)
    return Grammar(rules, type_aliases=aliases)


def read_modules(text: str, path=None) -> SourceFile:
    cur = _Cursor(text)
    src = SourceFile(path=path)
    while True:
        cur.skip()
        if cur.at_word("module"):
            cur.name()
            name = cur.ident("module name")
            cur.expect("{")
            src.module_defs.append((name, _module_body(cur, name, path)))
        elif cur.at_word("import"):
            cur.name()
            while True:
                src.imports.append(cur.ident("module name"))
                if cur.eat(";"):
                    break
                cur.expect(",")
        else:
            break
    src.body_offset = cur.pos
    src.program_body = text[cur.pos:]
    return src


def format_module(name, g) -> str:
    """Pretty-print a grammar in the surface syntax ``read_modules`` accepts."""
    lines = ["module %s {" % name]
    lines += ["  %s = %s;" % kv for kv in g.type_aliases.items()]
    lines += ["  %s;" % r for r in g.rules]
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# declare headers


def read_declare_header(text: str, offset: int = 0) -> DeclareHeader:
    cur = _Cursor(text, offset)
    if not cur.at_word("declare"):
        raise cur.error("expected 'declare'")
    cur.name()
    bindings = []
    while True:
        word = cur.ident("declared variable")
        if not cur.eat(":"):
            raise cur.error("malformed binding, expected ':'")
        bindings.append((word, cur.ident("nonterminal")))
        if not cur.eat(","):
            break
    if not cur.at("{"):
        raise cur.error("missing '{' after declare bindings")
    open_at = cur.pos
    depth = 0
    for k in range(open_at, len(text)):
        if text[k] == "{":
            depth += 1
        elif text[k] == "}":
            depth -= 1
            if depth == 0:
                header = 1 + 3 * len(bindings) + (len(bindings) - 1) + 1
                return DeclareHeader(bindings, text[open_at + 1:k], (open_at + 1, k), header)
    raise cur.error("missing '}' closing the declare body", open_at)


# --------------------------------------------------------------------------
# Module lookup


CORPUS_DIR = Path(__file__).with_name("corpus")


class ModuleLoader:
    """Resolve imported module names to grammars.

    Modules defined in the file being compiled win; otherwise ``NAME.es`` is
    looked up in the search path, which ends with the bundled corpus.
    """

    def __init__(self, search_path=()):
        self.search_path = [Path(p) for p in search_path] + [CORPUS_DIR]
        self.modules = {}

    def add_source(self, src: SourceFile):
        for name, g in src.module_defs:
            self.modules[name] = g

    def load(self, name):
        if name in self.modules:
            return self.modules[name]
        for d in self.search_path:
            path = d / (name + ".es")
            if path.is_file():
                src = read_modules(path.read_text(encoding="utf-8"), os.fspath(path))
                self.add_source(src)
                if name in self.modules:
                    return self.modules[name]
        raise ReaderError("unknown module %r" % name)

    def compose(self, names):
        return union_all(self.load(n) for n in names)
