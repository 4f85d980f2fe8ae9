"""Expression evaluation. Booleans are the integers 0 and 1.

Expressions are compiled once into closures over a mutable ``scope`` dict
(name -> value); quantifiers bind and restore their variables in place.
"""

from __future__ import annotations

import operator
from typing import Callable

from ..essence.ast import (Apply, BinOp, Defined, Domain, EmptySet, Expr, ForAll, Ident, IntLit, Not, OverCollection,
                           OverDomain, Sum, ToInt, TupleIndex, TupleLit, referenced_names)
from ..values import FunctionV, RelationV, SetV, Value
from .domains import DEFAULT_MAX_GROUND, ground
from .errors import IndexOutOfArity, PartialApplication, TypeMismatch, UnboundIdentifier

Compiled = Callable[[dict], Value]


class Env:
    """Values of givens and lettings plus the named domains in scope."""

    def __init__(self, values: dict[str, Value] | None = None, domains: dict[str, Domain] | None = None,
                 max_ground: int = DEFAULT_MAX_GROUND):
        self.values = dict(values or {})
        self.domains = dict(domains or {})
        self.max_ground = max_ground
        self._compiled: dict[int, tuple[Expr, Compiled]] = {}

    def compile(self, expr: Expr) -> Compiled:
        hit = self._compiled.get(id(expr))
        if hit is None:
            hit = (expr, _Compiler(self).expr(expr, frozenset()))
            self._compiled[id(expr)] = hit
        return hit[1]

    def eval(self, expr: Expr, scope: dict | None = None) -> Value:
        return self.compile(expr)(self.values if scope is None else scope)


def eval_expr(expr: Expr, env: Env | dict) -> Value:
    if not isinstance(env, Env):
        env = Env(env)
    return env.eval(expr)


def _bool(v: Value, where: str) -> int:
    if isinstance(v, int) and v in (0, 1):
        return v
    raise TypeMismatch(f"{where} expects a boolean (0/1), got {v!r}")


def _arith(op: str, fn):
    def apply(a, b):
        if not isinstance(a, int) or not isinstance(b, int):
            raise TypeMismatch(f"{op} expects integers, got {a!r} and {b!r}")
        return fn(a, b)
    return apply


_ARITH = {"+": _arith("+", operator.add), "-": _arith("-", operator.sub), "*": _arith("*", operator.mul)}


class _Compiler:
    def __init__(self, env: Env):
        self.env = env

    def expr(self, e: Expr, bound: frozenset[str]) -> Compiled:
        match e:
            case IntLit(v):
                return lambda s: v
            case Ident(name):
                def lookup(s, name=name):
                    try:
                        return s[name]
                    except KeyError:
                        raise UnboundIdentifier(f"{name!r} has no value") from None
                return lookup
            case TupleLit(elems):
                parts = [self.expr(x, bound) for x in elems]
                return lambda s: tuple(p(s) for p in parts)
            case EmptySet():
                empty = SetV()
                return lambda s: empty
            case Not(x):
                f = self.expr(x, bound)
                return lambda s: 1 - _bool(f(s), "!")
            case ToInt(x):
                f = self.expr(x, bound)
                return lambda s: _bool(f(s), "toInt")
            case Defined(x):
                f = self.expr(x, bound)

                def defined(s):
                    v = f(s)
                    if not isinstance(v, FunctionV):
                        raise TypeMismatch(f"defined expects a function, got {v!r}")
                    return v.defined()
                return defined
            case TupleIndex(x, i):
                f = self.expr(x, bound)

                def index(s):
                    v = f(s)
                    if not isinstance(v, tuple):
                        raise TypeMismatch(f"indexing a non-tuple {v!r}")
                    if not 1 <= i <= len(v):
                        raise IndexOutOfArity(f"index {i} out of range for {v!r}")
                    return v[i - 1]
                return index
            case BinOp(op, a, b):
                return self.binop(op, self.expr(a, bound), self.expr(b, bound))
            case Apply(fn, args):
                return self.apply(fn, [self.expr(x, bound) for x in args])
            case ForAll() | Sum():
                return self.quantifier(e, bound)
        raise TypeError(f"not an expression: {e!r}")

    def binop(self, op: str, f: Compiled, g: Compiled) -> Compiled:
        if op in _ARITH:
            fn = _ARITH[op]
            return lambda s: fn(f(s), g(s))
        if op == "=":
            return lambda s: int(f(s) == g(s))
        if op == "!=":
            return lambda s: int(f(s) != g(s))
        if op == "->":
            return lambda s: _bool(g(s), "->") if _bool(f(s), "->") else 1
        if op == "/\\":
            return lambda s: _bool(g(s), "/\\") if _bool(f(s), "/\\") else 0
        if op == "in":
            def member(s):
                coll = g(s)
                if not isinstance(coll, frozenset):
                    raise TypeMismatch(f"'in' expects a set or relation, got {coll!r}")
                return int(f(s) in coll)
            return member
        if op == "intersect":
            def intersect(s):
                a, b = f(s), g(s)
                if not isinstance(a, frozenset) or not isinstance(b, frozenset):
                    raise TypeMismatch(f"intersect expects sets, got {a!r} and {b!r}")
                cls = RelationV if isinstance(a, RelationV) and isinstance(b, RelationV) else SetV
                return cls(a & b)
            return intersect
        raise TypeError(f"unknown operator {op!r}")

    def apply(self, name: str, args: list[Compiled]) -> Compiled:
        def call(s):
            try:
                fn = s[name]
            except KeyError:
                raise UnboundIdentifier(f"{name!r} has no value") from None
            values = tuple(a(s) for a in args)
            if isinstance(fn, FunctionV):
                key = values[0] if len(values) == 1 else values
                if key not in fn:
                    raise PartialApplication(f"{name} is not defined on {key!r}")
                return fn(key)
            if isinstance(fn, RelationV) or (isinstance(fn, frozenset) and all(isinstance(t, tuple) for t in fn)):
                arity = next((len(t) for t in fn), len(values))
                if arity != len(values):
                    raise TypeMismatch(f"{name} has arity {arity}, applied to {len(values)} arguments")
                return int(values in fn)
            raise TypeMismatch(f"{name} is not a function or relation")
        return call

    def source(self, src, bound: frozenset[str]) -> Callable[[dict], object]:
        if isinstance(src, OverCollection):
            f = self.expr(src.expr, bound)

            def collection(s):
                v = f(s)
                if not isinstance(v, frozenset):
                    raise TypeMismatch(f"cannot quantify over {v!r}")
                return v
            return collection
        assert isinstance(src, OverDomain)
        env, domain = self.env, src.domain
        if referenced_names(domain) & bound:
            return lambda s: list(ground(domain, env, s))
        cache: list = []

        def static(s):
            if not cache:
                cache.append(list(ground(domain, env)))
            return cache[0]
        return static

    def quantifier(self, q: ForAll | Sum, bound: frozenset[str]) -> Compiled:
        binders = q.binders
        inner = bound | set(binders)
        body = self.expr(q.body, inner)
        source = self.source(q.source, bound)
        is_forall = isinstance(q, ForAll)

        if q.destructure:
            def each(s):
                for item in source(s):
                    if not isinstance(item, tuple) or len(item) != len(binders):
                        raise TypeMismatch(f"cannot destructure {item!r} into {len(binders)} names")
                    yield item
        elif len(binders) == 1:
            def each(s):
                for item in source(s):
                    yield (item,)
        else:
            def each(s):
                coll = list(source(s))

                def rec(depth):
                    if depth == len(binders):
                        yield ()
                        return
                    for item in coll:
                        for rest in rec(depth + 1):
                            yield (item, *rest)
                yield from rec(0)

        def run(s):
            saved = [(b, s[b]) for b in binders if b in s]
            total = 0
            try:
                for values in each(s):
                    for b, v in zip(binders, values):
                        s[b] = v
                    r = body(s)
                    if is_forall:
                        if not _bool(r, "forAll"):
                            return 0
                    else:
                        if not isinstance(r, int):
                            raise TypeMismatch(f"sum over non-integers: {r!r}")
                        total += r
            finally:
                for b in binders:
                    s.pop(b, None)
                s.update(saved)
            return 1 if is_forall else total
        return run
