"""Partially linear indexed grammars (stacks) and partially linear tree grammars (terms)."""
from plgram.bench import BenchReport, BenchRow, run_bench
from plgram.chart import (Chart, Forest, Item, SubtreeRef, TerminatorRef, build_forest,
                          chart_stats, recognize)
from plgram.constructions import (DYCK_CFG, Regex, SimpleCFG, builtin_grammar, builtin_grammars,
                                  example1, example2, example3, example4, example5, parse_cfg,
                                  parse_regex, plig_copy_from_regex, pltg_copy_from_cfg,
                                  regex_to_dfa)
from plgram.derivation import Derivation, check_derivation
from plgram.grammar import (ArityError, Grammar, GrammarError, GrammarSyntaxError, InvalidGrammar,
                            Production, Slot, ValidationReport, Violation, classify_grammar,
                            parse_grammar, plig_to_pltg, serialize_grammar, validate_grammar)
from plgram.oracle import (ConcreteItem, NotAccepted, OracleVerdict, enumerate_derivations,
                           enumerate_language, oracle_items, oracle_recognize)
from plgram.terms import NIL, Term, Var, render_avm, stack, term

__version__ = '0.1.0'
