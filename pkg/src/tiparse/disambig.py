"""Precedence/associativity filtering and most-specific parse selection."""

from __future__ import annotations

from dataclasses import dataclass

from .trees import Leaf, Node, RegionNode, nodes, pretty


class NoParse(Exception):
    pass


class Ambiguous(Exception):
    def __init__(self, candidates, message=None):
        self.candidates = list(candidates)
        super().__init__(message or "%d equally specific parses" % len(self.candidates))

    def describe(self):
        return "\n\n".join(pretty(t) for t in self.candidates)


@dataclass(frozen=True)
class ConflictReport:
    kind: str  # "assoc-violation" | "precedence-violation"
    position: tuple  # child-index path from the root to the offending node


def root_conflict_kind(t):
    ann = t.rule.annotation
    kids = t.children
    if not kids:
        return None
    if ann.assoc in ("right", "non"):
        c = kids[0]
        if isinstance(c, Node) and c.label == t.label and c.rule.annotation == ann:
            return "assoc-violation"
    if ann.assoc in ("left", "non"):
        c = kids[-1]
        if isinstance(c, Node) and c.label == t.label and c.rule.annotation == ann:
            return "assoc-violation"
    if ann.prec is not None:
        for c in kids:
            if isinstance(c, Node):
                p = c.rule.annotation.prec
                if p is not None and p < ann.prec:
                    return "precedence-violation"
    return None


def conflict(t) -> bool:
    """Whether ``t`` has a root priority conflict."""
    return isinstance(t, Node) and root_conflict_kind(t) is not None


def attach_conflict(rule, label, pos, child) -> bool:
    """Would putting ``child`` at RHS position ``pos`` of ``rule`` create a root conflict?

    ``label`` is the parent's label when already known, else ``None`` (the
    associativity check then waits for the finish step).
    """
    if not isinstance(child, Node):
        return False
    ann = rule.annotation
    cann = child.rule.annotation
    if ann.prec is not None and cann.prec is not None and cann.prec < ann.prec:
        return True
    if ann.assoc is None or label is None or child.label != label or cann != ann:
        return False
    last = len(rule.rhs) - 1
    if pos == 0 and ann.assoc in ("right", "non"):
        return True
    if pos == last and ann.assoc in ("left", "non"):
        return True
    return False


def conflicts(t):
    """Every root priority conflict anywhere in ``t``, as ``ConflictReport`` values."""
    out = []

    def walk(x, path):
        if isinstance(x, RegionNode):
            walk(x.body, path + (0,))
        elif isinstance(x, Node):
            kind = root_conflict_kind(x)
            if kind:
                out.append(ConflictReport(kind, path))
            for i, c in enumerate(x.children):
                walk(c, path + (i,))

    walk(t, ())
    return out


def filter_trees(trees):
    """Keep the trees none of whose subtrees has a root priority conflict."""
    return [t for t in trees if not any(conflict(n) for n in nodes(t))]


def fnshp_gate(item) -> bool:
    """True iff finishing the fully-dotted partial ``item`` yields a conflict-free root."""
    rule = item.rule
    if item.dot_left != 0 or item.dot_right != len(rule.rhs):
        raise ValueError("fnshp_gate needs a fully-dotted item")
    sub = dict(item.subst)
    lhs = rule.lhs
    label = sub.get(lhs.name) if lhs.name in rule.params else lhs.name
    t = Node(label, rule, item.children, sorted(sub.items()))
    return not conflict(t)


# --------------------------------------------------------------------------
# Most specific parse


def _is_coercion(t):
    return isinstance(t, Node) and len(t.children) == 1 and isinstance(t.children[0], Node)


def tree_geq(s, t, spec, memo=None) -> bool:
    """Is ``s`` at least as specific as ``t``?

    Nodes compare root first: labels by the specificity relation, then the
    children pointwise.  A single-child coercion node in either tree may be
    skipped over, so ``Int+Int`` is at least as specific as ``Float(Int+Int)``
    and ``Float(Int+Int)`` at least as specific as ``Float(Float+Float)``.
    ``memo`` caches answers by object identity across calls.
    """
    if s is t:
        return True
    if isinstance(s, Leaf) or isinstance(t, Leaf):
        return isinstance(s, Leaf) and isinstance(t, Leaf) and s.text == t.text
    if memo is not None:
        key = (id(s), id(t))
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = _tree_geq(s, t, spec, memo)
        return hit
    return _tree_geq(s, t, spec, None)


def _tree_geq(s, t, spec, memo):
    if isinstance(s, RegionNode) or isinstance(t, RegionNode):
        return (isinstance(s, RegionNode) and isinstance(t, RegionNode)
                and tree_geq(s.body, t.body, spec, memo))
    if not spec.geq(s.label, t.label):
        return False
    if len(s.children) == len(t.children) and all(
            tree_geq(a, b, spec, memo) for a, b in zip(s.children, t.children)):
        return True
    if _is_coercion(t) and tree_geq(s, t.children[0], spec, memo):
        return True
    # s's own coercion may be skipped too: fewer coercions is more specific
    if _is_coercion(s):
        return tree_geq(s.children[0], t, spec, memo)
    return False


def most_specific(trees, spec, memo=None):
    """The unique most specific tree, or ``None``; linear in the number of trees."""
    distinct = list(dict.fromkeys(trees))
    if not distinct:
        return None
    memo = {} if memo is None else memo

    def geq(a, b):
        return tree_geq(a, b, spec, memo)

    # a greatest tree, if any, survives this scan
    best = distinct[0]
    for u in distinct[1:]:
        if geq(u, best) and not geq(best, u):
            best = u
    if all(geq(best, u) for u in distinct):
        if not any(u is not best and geq(u, best) for u in distinct):
            return best
    return None


def select(trees, spec):
    """The unique most specific tree; raises ``NoParse`` or ``Ambiguous``."""
    distinct = list(dict.fromkeys(trees))
    if not distinct:
        raise NoParse("no parse")
    memo = {}
    best = most_specific(distinct, spec, memo)
    if best is not None:
        return best

    def geq(a, b):
        return tree_geq(a, b, spec, memo)

    maximal = [t for t in distinct
               if not any(u is not t and geq(u, t) and not geq(t, u) for u in distinct)]
    maximal.sort(key=str)
    raise Ambiguous(maximal)
