"""Item counts as more modules are imported.

Run:  python3 demos/grammar_scaling.py
"""
from tiparse.bench import Scenario, gen_scenario, measure, sparsity
from tiparse.chart import STRATEGIES

print("Typed modules: every copy adds a fresh nonterminal, but only V is declared.")
print("%4s %6s %9s" % ("k", "rules", "sparsity") + "".join("%11s" % s for s in STRATEGIES))
for k in (1, 5, 10, 25, 50):
    g = gen_scenario(Scenario("typed", k)).grammar
    row = [measure(Scenario("typed", k), s).items_generated for s in STRATEGIES]
    print("%4d %6d %9s" % (k, len(g.rules), sparsity(g)) + "".join("%11d" % n for n in row))

print()
print("Untyped modules: every copy accepts identifiers, so all of them fire.")
for k in (2, 4, 8):
    row = [measure(Scenario("untyped", k), s).items_generated for s in STRATEGIES]
    print("%4d %6s %9s" % (k, "", "") + "".join("%11d" % n for n in row))
