"""Structural comparison of specifications, optionally up to binder renaming."""

from __future__ import annotations

import itertools
from dataclasses import replace

from .ast import (
    Apply, Attribute, BinOp, Defined, Domain, EmptySet, Expr, Find, ForAll, FunctionDomain,
    Given, Ident, IntLit, IntRange, IntUnbounded, LettingDomain, LettingValue, NamedDomain, Not,
    OverCollection, OverDomain, RelationDomain, SetDomain, Specification, Sum, ToInt,
    TupleDomain, TupleIndex, TupleLit,
)


def struct_eq(a: Specification, b: Specification, alpha: bool = False) -> bool:
    """Equality ignoring comments and layout; with ``alpha`` quantifier
    binders are compared up to consistent renaming."""
    if alpha:
        return alpha_normalize(a) == alpha_normalize(b)
    return a == b


def alpha_normalize(spec: Specification) -> Specification:
    counter = itertools.count()
    decls = []
    for d in spec.declarations:
        match d:
            case LettingValue(name, expr):
                decls.append(LettingValue(name, _expr(expr, {}, counter)))
            case Given(name, dom) | Find(name, dom) | LettingDomain(name, dom):
                decls.append(replace(d, domain=_domain(dom, {}, counter)))
    constraints = tuple(_expr(c, {}, counter) for c in spec.constraints)
    return Specification(tuple(decls), constraints)


def rename_identifiers(spec: Specification, mapping: dict[str, str]) -> Specification:
    """Rename free identifiers, named domains and declarations per ``mapping``.

    Binders are left alone; a binder that shadows a renamed name keeps
    shadowing it.
    """
    decls = []
    for d in spec.declarations:
        name = mapping.get(d.name, d.name)
        match d:
            case LettingValue(_, expr):
                decls.append(LettingValue(name, _expr(expr, dict(mapping), None)))
            case Given(_, dom) | Find(_, dom) | LettingDomain(_, dom):
                decls.append(replace(d, name=name, domain=_domain(dom, dict(mapping), None)))
    constraints = tuple(_expr(c, dict(mapping), None) for c in spec.constraints)
    return Specification(tuple(decls), constraints, spec.comments, spec.name)


def _attrs(attrs: tuple[Attribute, ...], env, counter) -> tuple[Attribute, ...]:
    return tuple(Attribute(a.name, None if a.arg is None else _expr(a.arg, env, counter)) for a in attrs)


def _domain(d: Domain, env: dict[str, str], counter) -> Domain:
    match d:
        case IntUnbounded():
            return d
        case IntRange(lo, hi):
            return IntRange(None if lo is None else _expr(lo, env, counter),
                            None if hi is None else _expr(hi, env, counter))
        case NamedDomain(name):
            return NamedDomain(env.get(name, name)) if counter is None else d
        case RelationDomain(attrs, comps):
            return RelationDomain(_attrs(attrs, env, counter), tuple(_domain(c, env, counter) for c in comps))
        case SetDomain(attrs, elem):
            return SetDomain(_attrs(attrs, env, counter), _domain(elem, env, counter))
        case FunctionDomain(attrs, src, tgt):
            return FunctionDomain(_attrs(attrs, env, counter), _domain(src, env, counter), _domain(tgt, env, counter))
        case TupleDomain(comps):
            return TupleDomain(tuple(_domain(c, env, counter) for c in comps))
    raise TypeError(d)


def _expr(e: Expr, env: dict[str, str], counter) -> Expr:
    """Rewrite identifiers through ``env``.

    With a counter, binders get fresh canonical names (alpha-normalisation);
    without one, binders shadow entries of ``env`` (plain renaming).
    """
    match e:
        case IntLit() | EmptySet():
            return e
        case Ident(name):
            return Ident(env.get(name, name))
        case TupleLit(elems):
            return TupleLit(tuple(_expr(x, env, counter) for x in elems))
        case BinOp(op, lhs, rhs):
            return BinOp(op, _expr(lhs, env, counter), _expr(rhs, env, counter))
        case Not(x):
            return Not(_expr(x, env, counter))
        case ToInt(x):
            return ToInt(_expr(x, env, counter))
        case Defined(x):
            return Defined(_expr(x, env, counter))
        case TupleIndex(x, i):
            return TupleIndex(_expr(x, env, counter), i)
        case Apply(fn, args):
            return Apply(env.get(fn, fn), tuple(_expr(a, env, counter) for a in args))
        case ForAll() | Sum():
            match e.source:
                case OverDomain(dom):
                    source = OverDomain(_domain(dom, env, counter))
                case OverCollection(coll):
                    source = OverCollection(_expr(coll, env, counter))
            inner = dict(env)
            if counter is None:
                for b in e.binders:
                    inner.pop(b, None)
                binders = e.binders
            else:
                binders = tuple(f"_b{next(counter)}" for _ in e.binders)
                inner.update(zip(e.binders, binders))
            return type(e)(binders, source, _expr(e.body, inner, counter), e.destructure)
    raise TypeError(e)
