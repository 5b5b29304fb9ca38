"""A fixed, grammar-aware tokenizer.

Input is split on whitespace; each chunk is cut into the longest prefixes
that are either a literal of the grammar or a maximal run of a token class
(the grammar's own ``#rx`` classes plus built-in identifier and integer
classes).  Literals win ties.  Anything else is a one-character token.

Braces always stand alone and delimit *regions*: the contents of a region
are tokenized separately and replaced by one placeholder token in the
enclosing stream, to be parsed in a later phase.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

IDENTIFIER = re.compile(r"[a-zA-Z][a-zA-Z0-9]*")
INTEGER = re.compile(r"[0-9]+")
BUILTIN_CLASSES = (IDENTIFIER, INTEGER)


class LexError(Exception):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = "" if line is None else " at line %d, column %d" % (line, column)
        super().__init__(message + where)


class UnknownToken(LexError):
    pass


class UnbalancedBraces(LexError):
    pass


@dataclass(frozen=True)
class Token:
    text: str
    kind: str  # "literal" | "word" | "region"
    span: tuple
    offset: int = 0
    line: int = 1
    column: int = 1
    region: int | None = None


@dataclass
class Region:
    tokens: list
    text: str
    offset: int
    parent: int | None = None


@dataclass
class RegionTable:
    regions: dict = field(default_factory=dict)

    def __getitem__(self, rid):
        return self.regions[rid]

    def __len__(self):
        return len(self.regions)

    def __iter__(self):
        return iter(self.regions)

    def depth(self, rid):
        d = 0
        while rid is not None:
            rid = self.regions[rid].parent
            d += 1
        return d


def _line_col(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _longest_class_match(chunk, pos, classes):
    best = 0
    for rx in classes:
        for end in range(len(chunk), pos, -1):
            if end - pos <= best:
                break
            if rx.fullmatch(chunk, pos, end):
                best = end - pos
                break
    return best


def split_chunk(chunk, literals, classes):
    """Cut a whitespace-free chunk into token texts (longest match, literals first)."""
    out = []
    pos = 0
    by_first = {}
    for lit in literals:
        by_first.setdefault(lit[0], []).append(lit)
    while pos < len(chunk):
        lit_len = max((len(l) for l in by_first.get(chunk[pos], ()) if chunk.startswith(l, pos)),
                      default=0)
        cls_len = _longest_class_match(chunk, pos, classes)
        n = max(lit_len, cls_len)
        if n == 0:
            if chunk[pos].isalnum():
                raise UnknownToken("cannot tokenize %r" % chunk[pos:])
            n = 1
        out.append(chunk[pos:pos + n])
        pos += n
    return out


def _classes(grammar):
    if grammar is None:
        return BUILTIN_CLASSES
    return tuple(t.regex for t in grammar.token_classes) + BUILTIN_CLASSES


def tokenize(text: str, grammar=None):
    """Tokenize ``text`` into a top-level token list and a ``RegionTable``."""
    literals = set(grammar.literals) - {"{", "}"} if grammar is not None else set()
    classes = _classes(grammar)
    table = RegionTable()

    def scan(start, end, parent):
        tokens = []
        pos = start
        while pos < end:
            ch = text[pos]
            if ch.isspace():
                pos += 1
                continue
            if ch == "}":
                raise UnbalancedBraces("unexpected '}'", *_line_col(text, pos))
            if ch == "{":
                close = _matching_brace(text, pos, end)
                rid = len(table.regions)
                table.regions[rid] = None  # reserve preorder id
                inner = scan(pos + 1, close, rid)
                table.regions[rid] = Region(inner, text[pos + 1:close], pos + 1, parent)
                line, col = _line_col(text, pos)
                tokens.append(Token("{%d}" % rid, "region", (len(tokens), len(tokens) + 1),
                                    pos, line, col, rid))
                pos = close + 1
                continue
            chunk_end = pos
            while chunk_end < end and not text[chunk_end].isspace() and text[chunk_end] not in "{}":
                chunk_end += 1
            try:
                pieces = split_chunk(text[pos:chunk_end], literals, classes)
            except UnknownToken as e:
                raise UnknownToken(str(e), *_line_col(text, pos)) from None
            off = pos
            for piece in pieces:
                line, col = _line_col(text, off)
                kind = "literal" if piece in literals else "word"
                tokens.append(Token(piece, kind, (len(tokens), len(tokens) + 1), off, line, col))
                off += len(piece)
            pos = chunk_end
        return tokens

    tokens = scan(0, len(text), None)
    return tokens, table


def _matching_brace(text, pos, end):
    depth = 0
    for k in range(pos, end):
        if text[k] == "{":
            depth += 1
        elif text[k] == "}":
            depth -= 1
            if depth == 0:
                return k
    raise UnbalancedBraces("unclosed '{'", *_line_col(text, pos))


def tokenize_flat(text: str, grammar=None):
    """Token texts with braces kept inline (no region extraction)."""
    literals = set(grammar.literals) - {"{", "}"} if grammar is not None else set()
    classes = _classes(grammar)
    out = []
    for chunk in re.split(r"\s+|([{}])", text):
        if chunk:
            out.extend([chunk] if chunk in "{}" else split_chunk(chunk, literals, classes))
    return out


def hypotheses(tokens) -> set:
    """The initial item set: one ``(text, i, i+1)`` item per token."""
    return {(t.text, i, i + 1) for i, t in enumerate(tokens)}
