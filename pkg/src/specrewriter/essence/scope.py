"""Single-pass scoping plus the small amount of shape inference needed to
check tuple-index and destructuring arities."""

from __future__ import annotations

from ..errors import ArityError, ScopeError
from .ast import (
    Apply, BinOp, Defined, Domain, EmptySet, Expr, Find, ForAll, FunctionDomain, Given, Ident,
    IntLit, IntRange, IntUnbounded, LettingDomain, LettingValue, NamedDomain, Not,
    OverCollection, OverDomain, RelationDomain, SetDomain, Specification, Sum, ToInt,
    TupleDomain, TupleIndex, TupleLit,
)

# shapes: ("int",) | ("tuple", (shape, ...)) | ("coll", elem) | ("fn", target) | None
INT = ("int",)


class _Scope:
    def __init__(self):
        self.values: dict[str, object] = {}  # name -> shape
        self.domains: dict[str, Domain] = {}
        self.finds: set[str] = set()

    def domain_shape(self, d: Domain):
        match d:
            case IntRange() | IntUnbounded():
                return INT
            case NamedDomain(name):
                return self.domain_shape(self.domains[name]) if name in self.domains else None
            case RelationDomain(_, comps):
                return ("coll", ("tuple", tuple(self.domain_shape(c) for c in comps)))
            case SetDomain(_, elem):
                return ("coll", self.domain_shape(elem))
            case FunctionDomain(_, _, target):
                return ("fn", self.domain_shape(target))
            case TupleDomain(comps):
                return ("tuple", tuple(self.domain_shape(c) for c in comps))
        return None


def check_scope(spec: Specification) -> None:
    """Raise ScopeError (or ArityError) if ``spec`` is not well scoped."""
    scope = _Scope()
    seen: set[str] = set()
    for decl in spec.declarations:
        if decl.name in seen:
            raise ScopeError(f"duplicate declaration of {decl.name!r}")
        match decl:
            case Given(name, domain) | Find(name, domain):
                _check_domain(domain, scope, {}, allow_finds=False)
                scope.values[name] = scope.domain_shape(domain)
                if isinstance(decl, Find):
                    scope.finds.add(name)
            case LettingDomain(name, domain):
                _check_domain(domain, scope, {}, allow_finds=False)
                scope.domains[name] = domain
            case LettingValue(name, expr):
                scope.values[name] = _check_expr(expr, scope, {}, allow_finds=False)
        seen.add(decl.name)
    for constraint in spec.constraints:
        _check_expr(constraint, scope, {}, allow_finds=True)


def _check_domain(d: Domain, scope: _Scope, bound: dict, allow_finds: bool) -> None:
    match d:
        case IntUnbounded():
            pass
        case IntRange(lo, hi):
            for e in (lo, hi):
                if e is not None:
                    _check_expr(e, scope, bound, allow_finds)
        case NamedDomain(name):
            if name not in scope.domains:
                if name in scope.values or name in bound:
                    raise ScopeError(f"{name!r} is not a domain")
                raise ScopeError(f"domain {name!r} used before declaration")
        case RelationDomain(attrs, comps):
            for a in attrs:
                if a.arg is not None:
                    _check_expr(a.arg, scope, bound, allow_finds)
            for c in comps:
                _check_domain(c, scope, bound, allow_finds)
        case TupleDomain(comps):
            for c in comps:
                _check_domain(c, scope, bound, allow_finds)
        case SetDomain(attrs, elem):
            for a in attrs:
                if a.arg is not None:
                    _check_expr(a.arg, scope, bound, allow_finds)
            _check_domain(elem, scope, bound, allow_finds)
        case FunctionDomain(attrs, source, target):
            for a in attrs:
                if a.arg is not None:
                    _check_expr(a.arg, scope, bound, allow_finds)
            _check_domain(source, scope, bound, allow_finds)
            _check_domain(target, scope, bound, allow_finds)


def _lookup(name: str, scope: _Scope, bound: dict, allow_finds: bool):
    if name in bound:
        return bound[name]
    if name in scope.values:
        if name in scope.finds and not allow_finds:
            raise ScopeError(f"decision variable {name!r} used outside constraints")
        return scope.values[name]
    if name in scope.domains:
        raise ScopeError(f"domain {name!r} used as a value")
    raise ScopeError(f"identifier {name!r} used before declaration")


def _check_expr(e: Expr, scope: _Scope, bound: dict, allow_finds: bool):
    """Check scoping of ``e`` and return its inferred shape."""
    match e:
        case IntLit():
            return INT
        case EmptySet():
            return ("coll", None)
        case Ident(name):
            return _lookup(name, scope, bound, allow_finds)
        case TupleLit(elems):
            return ("tuple", tuple(_check_expr(x, scope, bound, allow_finds) for x in elems))
        case BinOp(op, lhs, rhs):
            ls = _check_expr(lhs, scope, bound, allow_finds)
            rs = _check_expr(rhs, scope, bound, allow_finds)
            if op == "intersect":
                return ls if ls is not None else rs
            return INT
        case Not(inner) | ToInt(inner):
            _check_expr(inner, scope, bound, allow_finds)
            return INT
        case Defined(inner):
            _check_expr(inner, scope, bound, allow_finds)
            return ("coll", None)
        case TupleIndex(inner, index):
            shape = _check_expr(inner, scope, bound, allow_finds)
            if shape is not None and shape[0] == "tuple":
                if not 1 <= index <= len(shape[1]):
                    raise ArityError(f"tuple index {index} out of range for a {len(shape[1])}-tuple")
                return shape[1][index - 1]
            if shape is not None and shape[0] != "tuple":
                raise ArityError(f"indexing a non-tuple with [{index}]")
            return None
        case Apply(fn, args):
            shape = _lookup(fn, scope, bound, allow_finds)
            for a in args:
                _check_expr(a, scope, bound, allow_finds)
            if shape is not None and shape[0] == "fn":
                return shape[1]
            if shape is not None and shape[0] == "coll":
                elem = shape[1]
                if elem is not None and elem[0] == "tuple" and len(elem[1]) != len(args):
                    raise ArityError(f"{fn!r} applied to {len(args)} arguments, expected {len(elem[1])}")
                return INT
            return None
        case ForAll(binders, source, body, destructure) | Sum(binders, source, body, destructure):
            match source:
                case OverDomain(domain):
                    _check_domain(domain, scope, bound, allow_finds)
                    elem = scope.domain_shape(domain)
                case OverCollection(coll):
                    cs = _check_expr(coll, scope, bound, allow_finds)
                    elem = cs[1] if cs is not None and cs[0] == "coll" else None
            inner = dict(bound)
            if destructure:
                if elem is not None:
                    if elem[0] != "tuple" or len(elem[1]) != len(binders):
                        raise ArityError(f"cannot destructure into {len(binders)} names")
                    for b, s in zip(binders, elem[1]):
                        inner[b] = s
                else:
                    for b in binders:
                        inner[b] = None
            else:
                for b in binders:
                    inner[b] = elem
            _check_expr(body, scope, inner, allow_finds)
            return INT
    raise TypeError(f"not an expression: {e!r}")
