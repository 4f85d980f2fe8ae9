"""Rewrite Essence constraint specifications with graph transformation rules.

The pipeline: parse a specification, encode it as a labelled graph, run a
GP2-style rule program over it, decode and print the result. A brute-force
evaluator and a solution converter check that the rewritten specification
has the same solutions as the original.
"""

from .converter import convert_solution, generate_converter, validate
from .essence import parse_spec, print_spec
from .evaluator import solve
from .graph import decode, encode
from .reformulation import NotApplicable, reformulate

__all__ = ["NotApplicable", "convert_solution", "decode", "encode", "generate_converter", "parse_spec",
           "print_spec", "reformulate", "solve", "validate"]
