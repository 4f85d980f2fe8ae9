"""Grounding domains to finite, canonically ordered value collections."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Iterable, Iterator

from ..essence.ast import (Domain, FunctionDomain, IntRange, IntUnbounded, NamedDomain, RelationDomain, SetDomain,
                           TupleDomain, attribute)
from ..essence.printer import print_domain
from ..values import FunctionV, RelationV, SetV, Value
from .errors import NegativeSize, TooLarge, TypeMismatch, UnboundIdentifier

if TYPE_CHECKING:
    from .expressions import Env

DEFAULT_MAX_GROUND = 10**7


@dataclass(frozen=True)
class GroundDomain:
    """The values of a domain; ``size`` is known before enumerating."""

    size: int
    _values: Callable[[], Iterable[Value]]

    def __iter__(self) -> Iterator[Value]:
        return iter(self._values())

    def __len__(self) -> int:
        return self.size


def resolve(domain: Domain, env: Env) -> Domain:
    seen = set()
    while isinstance(domain, NamedDomain):
        if domain.name in seen or domain.name not in env.domains:
            raise UnboundIdentifier(f"unknown domain {domain.name!r}")
        seen.add(domain.name)
        domain = env.domains[domain.name]
    return domain


def _int(value: Value, what: str) -> int:
    if not isinstance(value, int):
        raise TypeMismatch(f"{what} must be an integer, got {value!r}")
    return value


def _size_arg(attrs, env: Env, scope) -> int | None:
    attr = attribute(attrs, "size")
    if attr is None:
        return None
    k = _int(env.eval(attr.arg, scope), "size")
    if k < 0:
        raise NegativeSize(f"size {k} is negative")
    return k


def domain_size(domain: Domain, env: Env, scope=None) -> int | None:
    """Number of values, without enumerating; ``None`` when unbounded."""
    d = resolve(domain, env)
    match d:
        case IntUnbounded():
            return None
        case IntRange(lo, hi):
            if lo is None or hi is None:
                return None
            return max(0, _int(env.eval(hi, scope), "bound") - _int(env.eval(lo, scope), "bound") + 1)
        case TupleDomain(comps):
            sizes = [domain_size(c, env, scope) for c in comps]
            return None if None in sizes else math.prod(sizes)
        case SetDomain(attrs, elem):
            n = domain_size(elem, env, scope)
            k = _size_arg(attrs, env, scope)
            if n is None:
                return None
            return 2**n if k is None else math.comb(n, k)
        case RelationDomain(attrs, comps):
            sizes = [domain_size(c, env, scope) for c in comps]
            if None in sizes:
                return None
            n = math.prod(sizes)
            if attribute(attrs, "irreflexive") and len(comps) == 2 and n <= env.max_ground:
                left = set(_values(comps[0], env, scope, env.max_ground))
                n -= sum(1 for v in _values(comps[1], env, scope, env.max_ground) if v in left)
            k = _size_arg(attrs, env, scope)
            return 2**n if k is None else math.comb(n, k)
        case FunctionDomain(attrs, src, tgt):
            a, b = domain_size(src, env, scope), domain_size(tgt, env, scope)
            if a is None or b is None:
                return None
            return b**a if attribute(attrs, "total") else (b + 1)**a
    raise TypeError(d)


def ground(domain: Domain, env: Env, scope=None, max_size: int | None = None) -> GroundDomain:
    """Enumerate a domain lazily in canonical order.

    Raises ``TooLarge`` when the value count exceeds ``max_size`` (defaults
    to the environment's cap) or the domain is unbounded.
    """
    cap = env.max_ground if max_size is None else max_size
    size = domain_size(domain, env, scope)
    if size is None or size > cap:
        raise TooLarge(f"domain {print_domain(domain)}", size, cap)
    d = resolve(domain, env)
    return GroundDomain(size, lambda: _values(d, env, scope, cap))


def _values(d: Domain, env: Env, scope, cap: int) -> Iterator[Value]:
    d = resolve(d, env)
    match d:
        case IntRange(lo, hi):
            yield from range(env.eval(lo, scope), env.eval(hi, scope) + 1)
        case TupleDomain(comps):
            yield from itertools.product(*(list(ground(c, env, scope, cap)) for c in comps))
        case SetDomain(attrs, elem):
            base = list(ground(elem, env, scope, cap))
            yield from (SetV(c) for c in _subsets(base, _size_arg(attrs, env, scope)))
        case RelationDomain(attrs, comps):
            base = list(itertools.product(*(list(ground(c, env, scope, cap)) for c in comps)))
            if attribute(attrs, "irreflexive"):
                base = [t for t in base if t[0] != t[1]]
            yield from (RelationV(c) for c in _subsets(base, _size_arg(attrs, env, scope)))
        case FunctionDomain(attrs, src, tgt):
            keys = list(ground(src, env, scope, cap))
            targets = list(ground(tgt, env, scope, cap))
            if attribute(attrs, "total"):
                for image in itertools.product(targets, repeat=len(keys)):
                    yield FunctionV(zip(keys, image))
            else:
                for size in range(len(keys) + 1):
                    for chosen in itertools.combinations(keys, size):
                        for image in itertools.product(targets, repeat=size):
                            yield FunctionV(zip(chosen, image))
        case _:
            raise TypeError(d)


def _subsets(base: list, k: int | None) -> Iterator[tuple]:
    if k is not None:
        return itertools.combinations(base, k)
    return itertools.chain.from_iterable(itertools.combinations(base, r) for r in range(len(base) + 1))


def inhabits(value: Value, domain: Domain, env: Env) -> bool:
    """Membership test that never enumerates (so unbounded ints are fine)."""
    d = resolve(domain, env)
    match d:
        case IntUnbounded():
            return isinstance(value, int)
        case IntRange(lo, hi):
            if not isinstance(value, int):
                return False
            return ((lo is None or env.eval(lo) <= value) and (hi is None or value <= env.eval(hi)))
        case TupleDomain(comps):
            return (isinstance(value, tuple) and len(value) == len(comps)
                    and all(inhabits(v, c, env) for v, c in zip(value, comps)))
        case SetDomain(attrs, elem):
            k = _size_arg(attrs, env, None)
            return (isinstance(value, frozenset) and (k is None or len(value) == k)
                    and all(inhabits(v, elem, env) for v in value))
        case RelationDomain(attrs, comps):
            k = _size_arg(attrs, env, None)
            if not isinstance(value, frozenset) or (k is not None and len(value) != k):
                return False
            tup = TupleDomain(comps)
            if not all(inhabits(t, tup, env) for t in value):
                return False
            return not attribute(attrs, "irreflexive") or all(t[0] != t[1] for t in value)
        case FunctionDomain(attrs, src, tgt):
            if not isinstance(value, FunctionV):
                return False
            if not all(inhabits(k, src, env) and inhabits(v, tgt, env) for k, v in value.items()):
                return False
            if attribute(attrs, "total"):
                n = domain_size(src, env)
                return n is not None and len(value) == n
            return True
    raise TypeError(d)
