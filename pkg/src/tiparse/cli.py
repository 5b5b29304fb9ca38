"""The ``esc`` compiler driver.

    esc FILE.es [--strategy island|earley-td|earley-bu] [--emit PATH]
                [--metrics] [--trace] [--budget N] [-I DIR]
    esc --bench FAMILY [--scales 1,5,10] [--strategies island,earley-td] [--csv PATH]

Exit status is 0 on success, 1 for syntax, validation, lexing and
ambiguity errors, 2 when the item budget runs out.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import bench
from .chart import DEFAULT_BUDGET, ItemBudgetExceeded, STRATEGIES
from .codegen import MissingAction, emit_program
from .disambig import Ambiguous, NoParse, select
from .grammar import GrammarError, extend, union_all, validate
from .lexer import LexError, tokenize
from .phases import phased_parse
from .reader import ModuleLoader, ReaderError, read_declare_header, read_modules
from .trees import Node

EXIT_OK, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2


class CompileError(Exception):
    def __init__(self, message, status=EXIT_ERROR):
        super().__init__(message)
        self.status = status


@dataclass
class DriverConfig:
    input: str | None = None
    strategy: str = "island"
    top: str | None = None
    emit: str | None = None
    trace: bool = False
    metrics: bool = False
    budget: int = DEFAULT_BUDGET
    bench: str | None = None
    scales: tuple | None = None
    strategies: tuple = STRATEGIES
    csv: str | None = None
    search_path: tuple = ()

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be at least 1")


def _strategy(name):
    s = name.strip().replace("-", "_")
    if s not in STRATEGIES:
        raise argparse.ArgumentTypeError(
            "unknown strategy %r (choose island, earley-td or earley-bu)" % name)
    return s


def _masked(text, start, end):
    """``text[start:end]`` with everything before it blanked, so offsets stay file-relative."""
    return re.sub(r"[^\n]", " ", text[:start]) + text[start:end]


def _where(path, tok):
    return "%s:%d:%d" % (path, tok.line, tok.column)


def _at(path, text, offset):
    line = text.count("\n", 0, offset) + 1
    return "%s:%d:%d" % (path, line, offset - (text.rfind("\n", 0, offset) + 1) + 1)


@dataclass
class Compiled:
    text: str
    tree: object
    result: object
    seconds: float


def compile_source(text, path="<input>", strategy="island", top=None, budget=DEFAULT_BUDGET,
                   trace=None, search_path=()):
    """Run the whole pipeline on source ``text``; raise ``CompileError`` on failure."""
    try:
        src = read_modules(text, path)
        loader = ModuleLoader(search_path)
        loader.add_source(src)
        names = src.imports or [n for n, _ in src.module_defs]
        g = loader.compose(names) if names else union_all([])
    except ReaderError as e:
        raise CompileError("%s:%s" % (path, e)) from None

    report = validate(g)
    if not report.ok:
        lines = ["%s: %s: %s" % (d.rule.location if d.rule else path, d.code, d.message)
                 for d in report.errors]
        raise CompileError("\n".join(lines))

    start = src.body_offset
    body_end = len(text)
    bindings = []
    if re.match(r"\s*declare\b", text[start:]):
        try:
            header = read_declare_header(text, start)
        except ReaderError as e:
            raise CompileError("%s:%s" % (path, e)) from None
        bindings = header.bindings
        start, body_end = header.body_span
        if text[body_end + 1:].strip():
            raise CompileError("%s: unexpected text after the declare body"
                               % _at(path, text, body_end + 1))
        try:
            for word, nt in bindings:
                g = extend(g, nt, word)
        except GrammarError as e:
            raise CompileError("%s: declare: %s" % (_at(path, text, src.body_offset), e)) from None

    try:
        tokens, regions = tokenize(_masked(text, start, body_end), g)
    except LexError as e:
        raise CompileError("%s:%d:%d: %s" % (path, e.line or 0, e.column or 0, e)) from None
    if not tokens:
        raise CompileError("%s: NoParse: the program is empty" % _at(path, text, len(text)))

    t0 = time.perf_counter()
    try:
        result = phased_parse(g, tokens, regions, strategy, top, budget=budget, trace=trace)
    except ItemBudgetExceeded as e:
        raise CompileError("%s: %s" % (_where(path, tokens[0]), e), EXIT_BUDGET) from None
    except GrammarError as e:
        raise CompileError("%s: %s" % (_where(path, tokens[0]), e)) from None
    seconds = time.perf_counter() - t0

    try:
        tree = select(result.trees, g.index.spec)
    except NoParse:
        raise CompileError(_no_parse_message(path, tokens, result)) from None
    except Ambiguous as e:
        raise CompileError("%s: Ambiguous: %s\n%s"
                           % (_where(path, tokens[0]), e, e.describe())) from None
    try:
        program = emit_program(g, tree)
    except MissingAction as e:
        where = e.rule.location if e.rule is not None else path
        raise CompileError("%s: MissingAction: %s" % (where, e)) from None
    return Compiled(program.text(), tree, result, seconds)


def _no_parse_message(path, tokens, result):
    reach = 0
    for item in result.chart.items:
        if len(item) == 3 and item.i == 0 and isinstance(item.tree, Node):
            reach = max(reach, item.j)
    tok = tokens[min(reach, len(tokens) - 1)]
    msg = "%s: NoParse: no parse of the program; stuck at %r" % (_where(path, tok), tok.text)
    if "diagnostic" in result.metrics:
        msg += " (%s)" % result.metrics["diagnostic"]
    return msg


def _metrics_text(compiled, strategy):
    r = compiled.result
    plan = r.metrics.get("plan")
    regions = len(plan.steps) if plan is not None else 0
    return ("strategy=%s tokens=%d items=%d top_items=%d region_parses=%d time_s=%.6f"
            % (strategy, r.length, r.items_generated, r.metrics.get("items", 0), regions,
               compiled.seconds))


def compile_file(config: DriverConfig, out=sys.stdout, err=sys.stderr) -> int:
    path = Path(config.input)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        print("esc: cannot read %s: %s" % (path, e.strerror), file=err)
        return EXIT_ERROR
    try:
        compiled = compile_source(text, str(path), config.strategy, config.top, config.budget,
                                  err if config.trace else None,
                                  [path.parent, *config.search_path])
    except CompileError as e:
        print(str(e), file=err)
        return e.status
    if config.emit == "-":
        out.write(compiled.text)
    else:
        target = Path(config.emit) if config.emit else path.with_suffix(".rkt")
        target.write_text(compiled.text, encoding="utf-8")
    if config.metrics:
        print(_metrics_text(compiled, config.strategy), file=err)
    return EXIT_OK


def bench_cmd(config: DriverConfig, out=sys.stdout, err=sys.stderr) -> int:
    if config.bench not in bench.FAMILIES:
        print("esc: unknown family %r (expected one of %s)"
              % (config.bench, ", ".join(bench.FAMILIES)), file=err)
        return EXIT_ERROR
    rows = bench.run_suite([config.bench], config.scales, config.strategies, config.budget)
    text = bench.to_csv(rows)
    if config.csv:
        Path(config.csv).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def _int_list(text):
    try:
        values = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("scales must be positive")
    return values


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("budget must be at least 1")
    return n


def build_parser():
    p = argparse.ArgumentParser(prog="esc", description="Compile extensible-syntax programs.")
    p.add_argument("input", nargs="?", help="source file (.es)")
    p.add_argument("-I", "--path", action="append", default=[], metavar="DIR",
                   help="extra directory to search for imported modules")
    p.add_argument("--strategy", type=_strategy, default="island",
                   help="island (default), earley-td or earley-bu")
    p.add_argument("--top", help="start nonterminal (default: most specific spanning parse)")
    p.add_argument("--emit", metavar="PATH", help="output file; '-' for stdout")
    p.add_argument("--metrics", action="store_true", help="print item counts and time")
    p.add_argument("--trace", action="store_true", help="log every derived item to stderr")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                   help="maximum number of chart items")
    p.add_argument("--bench", metavar="FAMILY", help="run a benchmark family instead")
    p.add_argument("--scales", type=_int_list, help="comma-separated scales for --bench")
    p.add_argument("--strategies", help="comma-separated strategies for --bench")
    p.add_argument("--csv", metavar="PATH", help="write benchmark CSV here")
    return p


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    args = parser.parse_args(argv)
    strategies = STRATEGIES
    if args.strategies:
        try:
            strategies = tuple(_strategy(s) for s in args.strategies.split(","))
        except argparse.ArgumentTypeError as e:
            parser.error(str(e))
    config = DriverConfig(args.input, args.strategy, args.top, args.emit, args.trace,
                          args.metrics, args.budget, args.bench, args.scales, strategies,
                          args.csv, tuple(args.path))
    if config.bench:
        return bench_cmd(config, out, err)
    if not config.input:
        parser.error("an input file or --bench FAMILY is required")
    return compile_file(config, out, err)


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
