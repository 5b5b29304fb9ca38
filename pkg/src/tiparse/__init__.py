"""Type-oriented island parsing for composable, extensible syntax.

Grammars from several modules are composed into one; programs are parsed
by a deductive chart parser (top-down Earley, bottom-up Earley, or
bidirectional island parsing) in which declared variables act as islands
and nonterminals double as types.  Surviving parses are filtered by
precedence and associativity, the most specific one is selected, and it
is translated to Typed Racket.
"""

from .chart import (DEFAULT_BUDGET, STRATEGIES, ItemBudgetExceeded, ParseResult, parse,
                    parse_with_declares)
from .codegen import MissingAction, emit_definitions, emit_program, translate
from .disambig import Ambiguous, NoParse, conflict, filter_trees, select, tree_geq
from .grammar import (ActionSpec, Annotation, Grammar, GrammarError, Nonterminal, Rule, Scope,
                      Terminal, TokenClass, Variable, extend, specificity, union, union_all,
                      validate)
from .lexer import LexError, tokenize
from .phases import phased_parse
from .reader import ModuleLoader, ReaderError, read_declare_header, read_modules
from .trees import Leaf, Node, RegionNode, sexpr, tree_yield

__all__ = [
    "DEFAULT_BUDGET", "STRATEGIES", "ItemBudgetExceeded", "ParseResult", "parse",
    "parse_with_declares", "MissingAction", "emit_definitions", "emit_program", "translate",
    "Ambiguous", "NoParse", "conflict", "filter_trees", "select", "tree_geq", "ActionSpec",
    "Annotation", "Grammar", "GrammarError", "Nonterminal", "Rule", "Scope", "Terminal",
    "TokenClass", "Variable", "extend", "specificity", "union", "union_all", "validate",
    "LexError", "tokenize", "phased_parse", "ModuleLoader", "ReaderError",
    "read_declare_header", "read_modules", "Leaf", "Node", "RegionNode", "sexpr", "tree_yield",
]
