"""Scaled grammar and program families, and a harness that counts items.

Grammar scaling parses ``--A`` while importing ``k`` modules; program
scaling parses ``A + A + ... + A`` (``n`` terms) under a fixed grammar.
Each family comes in untyped, semi-typed and typed flavours.  Item counts
are deterministic and are the primary metric; times are informative.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .chart import DEFAULT_BUDGET, ItemBudgetExceeded, STRATEGIES, parse_with_declares
from .disambig import most_specific
from .grammar import Nonterminal, Variable, union_all
from .lexer import tokenize
from .reader import CORPUS_DIR, read_modules

FAMILIES = ("untyped", "semityped", "typed", "matrix-large", "program-scaling-untyped",
            "program-scaling-semityped", "program-scaling-typed")

DEFAULT_SCALES = {
    "untyped": (1, 2, 4, 8, 16),
    "semityped": (1, 5, 10, 20),
    "typed": (1, 5, 10, 25, 50),
    "matrix-large": (1, 2, 4, 8),
    "program-scaling-untyped": (1, 2, 3, 4, 5, 6),
    "program-scaling-semityped": (1, 5, 10, 20),
    "program-scaling-typed": (5, 10, 20, 40),
}

CSV_COLUMNS = ("family", "scale", "strategy", "rules_total", "items", "time_s", "outcome")

ID_MODULE = 'module Identifiers {\n  Id ::= #rx"^[a-zA-Z][a-zA-Z0-9]*$";\n}\n'


@dataclass(frozen=True)
class Scenario:
    family: str
    scale: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError("unknown family %r (expected one of %s)"
                             % (self.family, ", ".join(FAMILIES)))
        if self.scale < 1:
            raise ValueError("scale must be at least 1")


@dataclass
class Workload:
    """What a scenario parses: grammar, declared variables, program text, start symbol."""

    grammar: object
    declares: list
    program: str
    top: str | None = None
    gate: bool = True
    texts: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.grammar, self.declares, self.program))


@dataclass
class Measurement:
    scenario: Scenario
    strategy: str
    rules_total: int
    items_generated: int
    parse_time: float
    outcome: str  # ok | ambiguous | no-parse | budget-exceeded

    def row(self):
        return (self.scenario.family, self.scenario.scale, self.strategy, self.rules_total,
                self.items_generated, "%.6f" % self.parse_time, self.outcome)


# --------------------------------------------------------------------------
# Module texts


def untyped_module(i):
    # copies get their own nonterminal so that they do not collapse under union
    return 'module Untyped%d {\n  E ::= E%d;\n  E%d ::= Id | "-" E;\n}\n' % (i, i, i)


def semityped_modules(k, typed=False):
    operand = "" if typed else "Id | "
    out = ['module %s0 {\n  E ::= V;\n  V ::= %s"-" V;\n}\n'
           % ("Typed" if typed else "Semityped", operand)]
    for i in range(1, k + 1):
        out.append('module %s%d {\n  E ::= M%d;\n  M%d ::= %s"-" M%d;\n}\n'
                   % ("Typed" if typed else "Semityped", i, i, i, operand, i))
    return out


def _corpus(path):
    return (CORPUS_DIR / path).read_text(encoding="utf-8")


def renamed(text, mapping):
    """Module text with whole-word nonterminal names replaced."""
    import re
    rx = re.compile(r'"(?:[^"\\]|\\.)*"|\b(%s)\b' % "|".join(map(re.escape, mapping)))
    return rx.sub(lambda m: mapping[m.group(1)] if m.group(1) else m.group(), text)


MATRIX_LARGE = '''module MatrixAlgebra {
  Matrix ::= Matrix "+" Matrix [left,1]
           | Matrix "-" Matrix [left,1]
           | Matrix "*" Matrix [left,2]
           | ColVector "*" RowVector [left,2]
           | Matrix "'" | "(" Matrix ")";
  ColVector ::= ColVector "+" ColVector [left,1]
              | Matrix "*" ColVector [left,2]
              | Scalar "*" ColVector [left,2]
              | "(" ColVector ")";
  RowVector ::= ColVector "'";
  Scalar ::= "|" ColVector "|";
  Stmt ::= Matrix "=" Matrix ";" | ColVector "=" ColVector ";";
  Stmts ::= Stmt | Stmts Stmt;
}
'''

MATRIX_LARGE_PROGRAM = """B = A + u1 * v1' + u2 * v2';
x = b * (B' * y) + z;
w = a * (B * x);
"""

MATRIX_LARGE_DECLARES = ([(v, "Matrix") for v in ("A", "B")]
                         + [(v, "ColVector") for v in ("u1", "u2", "v1", "v2", "w", "x", "y", "z")]
                         + [(v, "Scalar") for v in ("a", "b")])


def _large_copy(i):
    regex = renamed(_corpus("fig3/RegularExpressions.es"),
                    {"Regexp": "Regexp%d" % i, "RegularExpressions": "RegularExpressions%d" % i})
    sets = renamed(_corpus("fig3/Sets.es"), {"Set": "Set%d" % i, "Sets": "Sets%d" % i})
    stmts = ('module Statements%d {\n  Stmt ::= Regexp%d "=" Regexp%d ";" | Set%d "=" Set%d ";";\n}\n'
             % (i, i, i, i, i))
    return [regex, sets, stmts]


def _fig3():
    return [_corpus("fig3/%s.es" % m) for m in ("MatrixAlgebra", "RegularExpressions", "Sets")]


SEMITYPED_VARIABLES = ('module Variables {\n  Matrix ::= Id;\n  Regexp ::= Id;\n  Set ::= Id;\n}\n'
                       + ID_MODULE)


def module_texts(s: Scenario):
    f, k = s.family, s.scale
    if f == "untyped":
        return [untyped_module(i) for i in range(1, k + 1)] + [ID_MODULE]
    if f == "semityped":
        return semityped_modules(k) + [ID_MODULE]
    if f == "typed":
        return semityped_modules(k, typed=True)
    if f == "matrix-large":
        out = [MATRIX_LARGE]
        for i in range(1, k + 1):
            out += _large_copy(i)
        return out
    if f == "program-scaling-untyped":
        return [_corpus("fig2/%s.es" % m) for m in ("MatrixAlgebra", "RegularExpressions", "Sets")]
    if f == "program-scaling-semityped":
        return _fig3() + [SEMITYPED_VARIABLES]
    return _fig3()


def compose(texts):
    return union_all(g for text in texts for _, g in read_modules(text).module_defs)


def gen_scenario(s: Scenario) -> Workload:
    texts = module_texts(s)
    g = compose(texts)
    f, k = s.family, s.scale
    if f in ("untyped", "semityped", "typed"):
        declares = [("A", "V")] if f == "typed" else []
        return Workload(g, declares, "--A", "E", texts=texts)
    if f == "matrix-large":
        return Workload(g, list(MATRIX_LARGE_DECLARES), MATRIX_LARGE_PROGRAM, "Stmts", texts=texts)
    program = " + ".join(["A"] * k)
    if f == "program-scaling-typed":
        return Workload(g, [("A", "Matrix")], program, None, texts=texts)
    # untyped programs are enumerated without priority pruning
    return Workload(g, [], program, None, gate=f != "program-scaling-untyped", texts=texts)


# --------------------------------------------------------------------------
# Metrics


def sparsity(g) -> Fraction:
    """Fraction of true entries of the nonterminal-by-rule occurrence matrix."""
    if not g.rules:
        raise ValueError("sparsity needs at least one rule")
    names = sorted(g.nonterminals)
    if not names:
        return Fraction(0)
    true = 0
    for r in g.rules:
        used = {s.name for s in r.rhs if isinstance(s, (Nonterminal, Variable))}
        true += sum(1 for n in names if n in used)
    return Fraction(true, len(names) * len(g.rules))


def declared_grammar(w: Workload):
    from .grammar import extend
    g = w.grammar
    for word, nt in w.declares:
        g = extend(g, nt, word)
    return g


def measure(s: Scenario, strategy, budget=DEFAULT_BUDGET, repeats=1, workload=None):
    w = gen_scenario(s) if workload is None else workload
    g = declared_grammar(w)
    tokens, _ = tokenize(w.program, g)
    times = []
    outcome = "ok"
    items = 0
    for _ in range(repeats):
        t0 = time.perf_counter()
        try:
            r = parse_with_declares(w.grammar, w.declares, tokens, strategy, w.top,
                                    budget=budget, gate=w.gate)
        except ItemBudgetExceeded as e:
            times.append(time.perf_counter() - t0)
            items, outcome = e.items, "budget-exceeded"
            break
        times.append(time.perf_counter() - t0)
        items = r.items_generated
        if not r.trees:
            outcome = "no-parse"
        elif most_specific(r.trees, g.index.spec) is None:
            outcome = "ambiguous"
    return Measurement(s, strategy, len(g.rules), items, statistics.median(times), outcome)


def run_suite(families, scales=None, strategies=STRATEGIES, budget=DEFAULT_BUDGET, repeats=1):
    """One measurement per (family, scale, strategy); ``scales`` defaults per family."""
    out = []
    for family in families:
        for k in (scales or DEFAULT_SCALES[family]):
            s = Scenario(family, k)
            w = gen_scenario(s)
            for strategy in strategies:
                out.append(measure(s, strategy, budget, repeats, w))
    return out


def to_csv(measurements, stream=None):
    own = stream is None
    stream = io.StringIO() if own else stream
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for m in measurements:
        writer.writerow(m.row())
    return stream.getvalue() if own else None


def to_tsv(measurements):
    """Gnuplot-friendly table: one column of item counts per strategy."""
    strategies = list(dict.fromkeys(m.strategy for m in measurements))
    rows = {}
    for m in measurements:
        rows.setdefault((m.scenario.family, m.scenario.scale, m.rules_total), {})[m.strategy] = \
            m.items_generated
    lines = ["# family\tscale\trules\t" + "\t".join(strategies)]
    for (family, k, rules), cells in rows.items():
        lines.append("\t".join([family, str(k), str(rules)]
                               + [str(cells.get(st, "")) for st in strategies]))
    return "\n".join(lines) + "\n"
