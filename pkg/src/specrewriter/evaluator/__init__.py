"""A brute-force semantics for the Essence subset."""

from .domains import DEFAULT_MAX_GROUND, GroundDomain, domain_size, ground, inhabits
from .errors import (EvaluationError, IndexOutOfArity, InvalidInstance, NegativeSize, PartialApplication, TooLarge,
                     TypeMismatch, UnboundIdentifier)
from .expressions import Env, eval_expr
from .solver import Solution, build_env, failing_constraints, iter_solutions, solve

__all__ = [
    "DEFAULT_MAX_GROUND", "Env", "EvaluationError", "GroundDomain", "IndexOutOfArity", "InvalidInstance",
    "NegativeSize", "PartialApplication", "Solution", "TooLarge", "TypeMismatch", "UnboundIdentifier", "build_env",
    "domain_size", "eval_expr", "failing_constraints", "ground", "inhabits", "iter_solutions", "solve",
]
