"""Parse trees.

``Leaf`` is a token, ``Node`` an internal node built from a grammar rule
(carrying the rule, its annotation through the rule, and the instantiation
of the rule's parameters), ``RegionNode`` the parsed contents of a
brace-delimited region.  Trees hash structurally and cache their hash, so
they double as chart keys.
"""

from __future__ import annotations


class Leaf:
    __slots__ = ("text", "kind", "region", "_hash")

    def __init__(self, text, kind="word", region=None):
        self.text = text
        self.kind = kind
        self.region = region
        self._hash = hash(("leaf", text, region))

    label = None

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, Leaf) and self.text == other.text
                                 and self.region == other.region)

    def __repr__(self):
        return "Leaf(%r)" % self.text

    def __str__(self):
        return self.text


class Node:
    __slots__ = ("label", "rule", "children", "inst", "_hash")

    def __init__(self, label, rule, children, inst=()):
        self.label = label
        self.rule = rule
        self.children = tuple(children)
        self.inst = tuple(inst)
        self._hash = hash((label, rule, self.children, self.inst))

    @property
    def annotation(self):
        return self.rule.annotation

    @property
    def subst(self):
        return dict(self.inst)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Node) and self._hash == other._hash
                and self.label == other.label
                and (self.rule is other.rule or self.rule == other.rule)
                and self.inst == other.inst and self.children == other.children)

    def __repr__(self):
        return "Node(%s)" % sexpr(self)

    def __str__(self):
        return sexpr(self)


class RegionNode:
    """A ``{ ... }`` region whose body has been parsed in a later phase."""

    __slots__ = ("region", "body", "_hash")

    label = None

    def __init__(self, region, body):
        self.region = region
        self.body = body
        self._hash = hash(("region", region, body))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, RegionNode) and self.region == other.region
                                 and self.body == other.body)

    def __repr__(self):
        return "RegionNode(%d, %s)" % (self.region, sexpr(self.body))


def tree_yield(t) -> list:
    """Token texts at the leaves; a region yields its braces and contents."""
    out = []
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Leaf):
            out.append(x.text)
        elif isinstance(x, RegionNode):
            stack.append(Leaf("}"))
            stack.append(x.body)
            stack.append(Leaf("{"))
        else:
            stack.extend(reversed(x.children))
    return out


def surface_yield(t) -> list:
    """Like ``tree_yield`` but a region counts as its single placeholder token."""
    if isinstance(t, Leaf):
        return [t.text]
    if isinstance(t, RegionNode):
        return ["{%d}" % t.region]
    out = []
    for c in t.children:
        out.extend(surface_yield(c))
    return out


def sexpr(t) -> str:
    if isinstance(t, Leaf):
        return t.text
    if isinstance(t, RegionNode):
        return "{%s}" % sexpr(t.body)
    return "(%s %s)" % (t.label, " ".join(sexpr(c) for c in t.children))


def nodes(t):
    """All internal nodes of ``t``, preorder, including nodes inside regions."""
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Node):
            yield x
            stack.extend(reversed(x.children))
        elif isinstance(x, RegionNode):
            stack.append(x.body)


def pretty(t, indent=0) -> str:
    """Multi-line rendering with rule provenance, for ambiguity diagnostics."""
    pad = "  " * indent
    if isinstance(t, Leaf):
        return pad + repr(t.text)
    if isinstance(t, RegionNode):
        return pad + "{\n" + pretty(t.body, indent + 1) + "\n" + pad + "}"
    head = "%s%s    ; %s" % (pad, t.label, t.rule)
    if t.inst:
        head += "  with " + ", ".join("%s=%s" % kv for kv in t.inst)
    return "\n".join([head] + [pretty(c, indent + 1) for c in t.children])
