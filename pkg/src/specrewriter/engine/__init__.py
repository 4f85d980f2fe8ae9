"""GP2-style graph rewriting: rules, matching and program execution."""

from .matching import HostIndex, Match, find_matches, first_match, iter_matches
from .rewriting import DEFAULT_FUEL, Application, FuelExhausted, Stuck, apply_rule, run
from .rules import (Call, Choice, Concat, InterfaceMismatch, Lit, Loop, MarkPattern, PatternEdge, PatternGraph,
                    PatternNode, Rule, RuleProgram, RuleSet, Seq, Try, UndeclaredVariable, UnknownRule, Var,
                    format_program, parse_rule_file)

__all__ = [
    "Application", "Call", "Choice", "Concat", "DEFAULT_FUEL", "FuelExhausted", "HostIndex", "InterfaceMismatch",
    "Lit", "Loop", "MarkPattern", "Match", "PatternEdge", "PatternGraph", "PatternNode", "Rule", "RuleProgram",
    "RuleSet", "Seq", "Stuck", "Try", "UndeclaredVariable", "UnknownRule", "Var", "apply_rule", "find_matches",
    "first_match", "format_program", "iter_matches", "parse_rule_file", "run",
]
