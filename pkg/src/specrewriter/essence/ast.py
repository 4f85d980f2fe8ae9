"""Abstract syntax for the supported Essence subset.

All nodes are frozen dataclasses holding tuples, so specifications are
hashable values and structural equality is plain ``==``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Union


# ---------------------------------------------------------------- domains


@dataclass(frozen=True)
class Attribute:
    name: str
    arg: Expr | None = None


@dataclass(frozen=True)
class IntRange:
    lo: Expr | None
    hi: Expr | None


@dataclass(frozen=True)
class IntUnbounded:
    pass


@dataclass(frozen=True)
class NamedDomain:
    name: str


@dataclass(frozen=True)
class RelationDomain:
    attrs: tuple[Attribute, ...]
    components: tuple[Domain, ...]


@dataclass(frozen=True)
class SetDomain:
    attrs: tuple[Attribute, ...]
    element: Domain


@dataclass(frozen=True)
class FunctionDomain:
    attrs: tuple[Attribute, ...]
    source: Domain
    target: Domain


@dataclass(frozen=True)
class TupleDomain:
    components: tuple[Domain, ...]


Domain = Union[IntRange, IntUnbounded, NamedDomain, RelationDomain, SetDomain, FunctionDomain, TupleDomain]


# ------------------------------------------------------------ expressions


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class TupleLit:
    elems: tuple[Expr, ...]


@dataclass(frozen=True)
class EmptySet:
    pass


BINARY_OPS = ("+", "-", "*", "=", "!=", "->", "/\\", "in", "intersect")


@dataclass(frozen=True)
class BinOp:
    op: str
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Not:
    expr: Expr


@dataclass(frozen=True)
class TupleIndex:
    expr: Expr
    index: int  # 1-based


@dataclass(frozen=True)
class Apply:
    fn: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class OverDomain:
    domain: Domain


@dataclass(frozen=True)
class OverCollection:
    expr: Expr


QuantSource = Union[OverDomain, OverCollection]


@dataclass(frozen=True)
class ForAll:
    binders: tuple[str, ...]
    source: QuantSource
    body: Expr
    # `forAll (u,v) in E` destructures each element; `forAll u, v : D` nests
    destructure: bool = False


@dataclass(frozen=True)
class Sum:
    binders: tuple[str, ...]
    source: QuantSource
    body: Expr
    destructure: bool = False


@dataclass(frozen=True)
class ToInt:
    expr: Expr


@dataclass(frozen=True)
class Defined:
    expr: Expr


Expr = Union[IntLit, Ident, TupleLit, EmptySet, BinOp, Not, TupleIndex, Apply, ForAll, Sum, ToInt, Defined]
Quantifier = (ForAll, Sum)


# ----------------------------------------------------------- declarations


@dataclass(frozen=True)
class Given:
    name: str
    domain: Domain


@dataclass(frozen=True)
class LettingDomain:
    name: str
    domain: Domain


@dataclass(frozen=True)
class LettingValue:
    name: str
    expr: Expr


@dataclass(frozen=True)
class Find:
    name: str
    domain: Domain


Declaration = Union[Given, LettingDomain, LettingValue, Find]


@dataclass(frozen=True)
class Specification:
    declarations: tuple[Declaration, ...] = ()
    constraints: tuple[Expr, ...] = ()
    # (item index, text): the comment precedes declarations+constraints[index]
    comments: tuple[tuple[int, str], ...] = field(default=(), compare=False)
    name: str = field(default="spec", compare=False)

    def declaration(self, name: str) -> Declaration | None:
        for decl in self.declarations:
            if decl.name == name:
                return decl
        return None

    @property
    def finds(self) -> tuple[Find, ...]:
        return tuple(d for d in self.declarations if isinstance(d, Find))

    @property
    def givens(self) -> tuple[Given, ...]:
        return tuple(d for d in self.declarations if isinstance(d, Given))


def attribute(attrs: tuple[Attribute, ...], name: str) -> Attribute | None:
    for attr in attrs:
        if attr.name == name:
            return attr
    return None


def referenced_names(node) -> set[str]:
    """Every identifier, function name or domain name mentioned under ``node``."""
    found: set[str] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, tuple):
            stack.extend(n)
        elif isinstance(n, (Ident, NamedDomain)):
            found.add(n.name)
        elif isinstance(n, Apply):
            found.add(n.fn)
            stack.extend(n.args)
        elif dataclasses.is_dataclass(n):
            stack.extend(getattr(n, f.name) for f in dataclasses.fields(n))
    return found
