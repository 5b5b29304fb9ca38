"""How precedence, associativity and specificity narrow the parses of one sentence.

Run:  python3 demos/ambiguity.py
"""
from tiparse.chart import parse
from tiparse.disambig import Ambiguous, filter_trees, select
from tiparse.lexer import tokenize
from tiparse.reader import read_modules
from tiparse.grammar import union_all
from tiparse.trees import sexpr


def grammar(text):
    return union_all(g for _, g in read_modules(text).module_defs)


bare = grammar('module Bare { E ::= Id | E "+" E | E "*" E; Id ::= #rx"^[a-z]+$"; }')
tokens, _ = tokenize("a + b * c + d", bare)
trees = parse(bare, tokens, "island", "E", gate=False).trees
print("no annotations: %d parses" % len(trees))
try:
    select(trees, bare.index.spec)
except Ambiguous as e:
    print("  select gives up with %d candidates" % len(e.candidates))

ranked = grammar('module Ranked { E ::= Id | E "+" E [left,1] | E "*" E [left,2];'
                 ' Id ::= #rx"^[a-z]+$"; }')
tokens, _ = tokenize("a + b * c + d", ranked)
raw = parse(ranked, tokens, "island", "E", gate=False).trees
print("annotated, unfiltered: %d parses, filtered: %d" % (len(raw), len(filter_trees(raw))))
print(" ", sexpr(select(parse(ranked, tokens, "island", "E").trees, ranked.index.spec)))

numbers = grammar('module Numbers { Float ::= Int; Float ::= Float "+" Float;'
                  ' Int ::= Int "+" Int; Int ::= "1" | "2"; }')
tokens, _ = tokenize("1 + 2", numbers)
trees = parse(numbers, tokens, "island").trees
print("coercions: %d parses of 1 + 2" % len(trees))
for t in sorted(trees, key=sexpr):
    print("   ", sexpr(t))
print("  most specific:", sexpr(select(trees, numbers.index.spec)))
