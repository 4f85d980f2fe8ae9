"""Map solutions of a reformulated specification back to the original type.

Two routes are offered and tested against each other: a generated
converter specification (solve it with the rewritten solution as a
parameter) and a direct in-process conversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import SpecRewriterError
from .essence.ast import (Apply, Declaration, Defined, Domain, Find, ForAll, FunctionDomain, Given, Ident,
                          LettingDomain, LettingValue, NamedDomain, OverCollection, RelationDomain, SetDomain,
                          Specification, referenced_names)
from .evaluator import Env, build_env, failing_constraints, inhabits
from .values import FunctionV, RelationV, Value, format_value


class Unsupported(SpecRewriterError):
    """No bridge template is registered for this pair of find types."""


class NoConversionNeeded(Unsupported):
    """Both specifications already declare the same find domain."""


class DomainMismatch(SpecRewriterError):
    pass


@dataclass(frozen=True)
class ConverterSpec:
    spec: Specification
    solution_name: str
    find_name: str


@dataclass(frozen=True)
class Valid:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Invalid:
    failures: list[str]

    def __bool__(self) -> bool:
        return False


# ---------------------------------------------------------------- registry


@dataclass(frozen=True)
class Bridge:
    """How to build the bridging constraint and convert values directly."""

    constraint: Callable[[str, str, Callable[[str], str]], object]
    convert: Callable[[Value], Value]


def _resolve(domain: Domain, decls: Mapping[str, Declaration]) -> Domain:
    while isinstance(domain, NamedDomain) and isinstance(decls.get(domain.name), LettingDomain):
        domain = decls[domain.name].domain
    return domain


def shape(domain: Domain, spec: Specification) -> str:
    decls = {d.name: d for d in spec.declarations}
    d = _resolve(domain, decls)
    if isinstance(d, FunctionDomain) and isinstance(_resolve(d.target, decls), SetDomain):
        return "function-of-sets"
    if isinstance(d, RelationDomain):
        return "relation" if len(d.components) == 2 else "relation-nary"
    return type(d).__name__


def _function_of_sets_to_relation(value: Value) -> Value:
    if not isinstance(value, FunctionV):
        raise DomainMismatch(f"expected a function, got {format_value(value)}")
    pairs = set()
    for key, image in value.items():
        if not isinstance(image, frozenset):
            raise DomainMismatch(f"expected a set image for {format_value(key)}, got {format_value(image)}")
        pairs.update((key, c) for c in image)
    return RelationV(pairs)


def _membership_constraint(solution: str, find: str, fresh: Callable[[str], str]):
    # forAll item in defined(solution) . forAll colour in solution(item) . find(item, colour)
    item, colour = fresh("item"), fresh("colour")
    return ForAll((item,), OverCollection(Defined(Ident(solution))),
                  ForAll((colour,), OverCollection(Apply(solution, (Ident(item),))),
                         Apply(find, (Ident(item), Ident(colour)))))


BRIDGES: dict[tuple[str, str], Bridge] = {
    ("function-of-sets", "relation"): Bridge(_membership_constraint, _function_of_sets_to_relation),
}


def _single_find(spec: Specification) -> Find:
    finds = spec.finds
    if len(finds) != 1:
        raise Unsupported(f"expected exactly one find, found {len(finds)}")
    return finds[0]


def bridge_for(original: Specification, rewritten: Specification) -> Bridge:
    orig, new = _single_find(original), _single_find(rewritten)
    if orig.name != new.name:
        raise Unsupported(f"find names differ: {orig.name!r} vs {new.name!r}")
    if orig.domain == new.domain and shape(orig.domain, original) == shape(new.domain, rewritten):
        raise NoConversionNeeded(f"{orig.name} has the same domain in both specifications")
    key = (shape(new.domain, rewritten), shape(orig.domain, original))
    if key not in BRIDGES:
        raise Unsupported(f"no converter from {key[0]} to {key[1]}")
    return BRIDGES[key]


# -------------------------------------------------------------- generation


def _fresh(taken: set[str]) -> Callable[[str], str]:
    def fresh(base: str) -> str:
        name, i = base, 2
        while name in taken:
            name, i = f"{base}{i}", i + 1
        taken.add(name)
        return name
    return fresh


def _decl_deps(d: Declaration) -> set[str]:
    return referenced_names(d.expr if isinstance(d, LettingValue) else d.domain)


def generate_converter(original: Specification, rewritten: Specification) -> ConverterSpec:
    """Build the converter specification for a (original, rewritten) pair.

    Non-find declarations come from the rewritten specification, keeping
    only those the two find domains depend on. Givens are placed as early
    as their dependencies allow.
    """
    bridge = bridge_for(original, rewritten)
    orig_find, new_find = _single_find(original), _single_find(rewritten)
    decls = {d.name: d for d in rewritten.declarations if not isinstance(d, Find)}
    for d in original.declarations:
        if not isinstance(d, Find) and d.name not in decls and d.name in _decl_deps(orig_find):
            decls[d.name] = d

    needed: set[str] = set()
    frontier = referenced_names(new_find.domain) | referenced_names(orig_find.domain)
    while frontier:
        name = frontier.pop()
        if name in decls and name not in needed:
            needed.add(name)
            frontier |= _decl_deps(decls[name])

    taken = set(decls) | {orig_find.name}
    fresh = _fresh(taken)
    solution = fresh("solution")
    pending = [d for d in decls.values() if d.name in needed]
    pending.append(Given(solution, new_find.domain))
    ordered: list[Declaration] = []
    placed: set[str] = set()
    while pending:
        ready = [d for d in pending if _decl_deps(d) & set(decls) <= placed]
        if not ready:
            raise Unsupported("cyclic declarations")
        pick = next((d for d in ready if isinstance(d, Given)), ready[0])
        ordered.append(pick)
        placed.add(pick.name)
        pending.remove(pick)
    ordered.append(Find(orig_find.name, orig_find.domain))

    constraint = bridge.constraint(solution, orig_find.name, fresh)
    spec = Specification(tuple(ordered), (constraint,), name=f"{original.name}-converter")
    return ConverterSpec(spec, solution, orig_find.name)


# -------------------------------------------------------------- conversion


def convert_solution(value: Value, original_find_domain: Domain | None = None, env: Env | None = None,
                     bridge: Bridge | None = None) -> Value:
    """Convert a rewritten solution directly; checks the original domain when an env is given."""
    result = (bridge or BRIDGES[("function-of-sets", "relation")]).convert(value)
    if original_find_domain is not None and env is not None and not inhabits(result, original_find_domain, env):
        raise DomainMismatch(f"{format_value(result)} is not in the original find domain")
    return result


def validate(original: Specification, instance: Mapping[str, Value], candidate) -> Valid | Invalid:
    """Check a candidate (a value for the single find, or a name -> value map)."""
    if not isinstance(candidate, Mapping):
        candidate = {_single_find(original).name: candidate}
    failures = failing_constraints(original, instance, candidate)
    return Invalid(failures) if failures else Valid()


def original_env(original: Specification, instance: Mapping[str, Value]) -> Env:
    return build_env(original, instance)


__all__ = [
    "BRIDGES", "Bridge", "ConverterSpec", "DomainMismatch", "Invalid", "NoConversionNeeded", "Unsupported", "Valid",
    "bridge_for", "convert_solution", "generate_converter", "original_env", "shape", "validate",
]
