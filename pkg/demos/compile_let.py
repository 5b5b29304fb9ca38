"""Compile the let example end to end and show each stage.

Run:  python3 demos/compile_let.py
"""
from tiparse.cli import compile_source
from tiparse.reader import CORPUS_DIR
from tiparse.trees import sexpr

source = (CORPUS_DIR / "programs" / "let.es").read_text()
print(source)

compiled = compile_source(source, "let.es")
plan = compiled.result.metrics["plan"]
print("regions parsed:", [(rid, dict(b)) for rid, b, _ in plan.steps])
print("items:", compiled.result.items_generated)
print()
print("selected tree:")
print(" ", sexpr(compiled.tree))
print()
print(compiled.text)
