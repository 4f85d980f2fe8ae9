"""Brute-force solving: enumerate every candidate for the finds, keep those
that satisfy all constraints."""

from __future__ import annotations

import itertools
from typing import Iterator, Mapping

from ..essence.ast import Find, Given, LettingDomain, LettingValue, Specification
from ..essence.printer import print_domain, print_expr
from ..values import Value, format_value
from .domains import DEFAULT_MAX_GROUND, TooLarge, domain_size, ground, inhabits
from .errors import EvaluationError, InvalidInstance
from .expressions import Env

Solution = dict[str, Value]


def build_env(spec: Specification, instance: Mapping[str, Value], max_ground: int = DEFAULT_MAX_GROUND,
              check: bool = True) -> Env:
    """Bind givens from ``instance`` and evaluate lettings, in declaration order."""
    env = Env(max_ground=max_ground)
    for d in spec.declarations:
        match d:
            case Given(name, domain):
                if name not in instance:
                    raise InvalidInstance(f"no value for given {name!r}")
                value = instance[name]
                if check and not inhabits(value, domain, env):
                    raise InvalidInstance(
                        f"{name} = {format_value(value)} is not in domain {print_domain(domain)}")
                env.values[name] = value
            case LettingDomain(name, domain):
                env.domains[name] = domain
            case LettingValue(name, expr):
                env.values[name] = env.eval(expr)
    return env


def candidate_count(spec: Specification, env: Env) -> int | None:
    total = 1
    for f in spec.finds:
        n = domain_size(f.domain, env)
        if n is None:
            return None
        total *= n
    return total


def iter_solutions(spec: Specification, instance: Mapping[str, Value],
                   max_ground: int = DEFAULT_MAX_GROUND) -> Iterator[Solution]:
    """Lazily yield solutions in canonical order (finds vary rightmost-fastest)."""
    env = build_env(spec, instance, max_ground)
    finds: tuple[Find, ...] = spec.finds
    if not finds:
        raise EvaluationError("specification has no find")
    total = candidate_count(spec, env)
    if total is None or total > max_ground:
        raise TooLarge("candidate space", total, max_ground)
    grounds = [ground(f.domain, env) for f in finds]
    checks = [(c, env.compile(c)) for c in spec.constraints]
    names = [f.name for f in finds]
    scope = dict(env.values)
    for combo in itertools.product(*grounds) if len(grounds) > 1 else ((v,) for v in grounds[0]):
        for name, value in zip(names, combo):
            scope[name] = value
        try:
            ok = all(check(scope) for _, check in checks)
        except EvaluationError as exc:
            raise type(exc)(f"{exc} (while checking {_describe(names, combo)})") from exc
        if ok:
            yield dict(zip(names, combo))


def solve(spec: Specification, instance: Mapping[str, Value], limit: int | None = None,
          max_ground: int = DEFAULT_MAX_GROUND) -> list[Solution]:
    """All solutions (or the first ``limit``) in canonical enumeration order."""
    solutions = iter_solutions(spec, instance, max_ground)
    if limit is not None:
        solutions = itertools.islice(solutions, limit)
    return list(solutions)


def failing_constraints(spec: Specification, instance: Mapping[str, Value], solution: Mapping[str, Value],
                        max_ground: int = DEFAULT_MAX_GROUND) -> list[str]:
    """Printed constraints that do not evaluate to 1, plus domain violations."""
    env = build_env(spec, instance, max_ground)
    failures = []
    for f in spec.finds:
        if f.name not in solution:
            failures.append(f"missing value for {f.name}")
        elif not inhabits(solution[f.name], f.domain, env):
            failures.append(f"{f.name} is not in domain {print_domain(f.domain)}")
    if failures:
        return failures
    scope = {**env.values, **solution}
    for c in spec.constraints:
        try:
            ok = env.compile(c)(scope) == 1
        except EvaluationError as exc:
            failures.append(f"{print_expr(c)} (error: {exc})")
            continue
        if not ok:
            failures.append(print_expr(c))
    return failures


def _describe(names, combo) -> str:
    return ", ".join(f"{n} = {format_value(v)}" for n, v in zip(names, combo))
