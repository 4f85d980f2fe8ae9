"""Recursive-descent parser for the Essence subset.

Operator precedence, loosest first::

    forAll / sum  (prefix, body extends right)
    ->            (right associative)
    /\\
    =  !=  in
    intersect
    +  -
    *
    !             (prefix)
    f(args)  e[i] (postfix)
"""

from __future__ import annotations

from ..errors import ParseError
from .ast import (
    Apply, Attribute, BinOp, Declaration, Defined, Domain, EmptySet, Expr, Find, ForAll,
    FunctionDomain, Given, Ident, IntLit, IntRange, IntUnbounded, LettingDomain, LettingValue,
    NamedDomain, Not, OverCollection, OverDomain, RelationDomain, SetDomain, Specification, Sum,
    ToInt, TupleDomain, TupleIndex, TupleLit,
)
from .lexer import TokenStream

ATTRIBUTES_WITH_ARG = frozenset({"size"})
ATTRIBUTES_WITHOUT_ARG = frozenset({"irreflexive", "total"})

# binary operator levels, loosest first; quantifiers sit below level 0
_LEVELS: list[tuple[frozenset[str], str]] = [
    (frozenset({"->"}), "right"),
    (frozenset({"/\\"}), "left"),
    (frozenset({"=", "!=", "in"}), "left"),
    (frozenset({"intersect"}), "left"),
    (frozenset({"+", "-"}), "left"),
    (frozenset({"*"}), "left"),
]
PRECEDENCE = {op: i + 1 for i, (ops, _) in enumerate(_LEVELS) for op in ops}
RIGHT_ASSOC = frozenset({"->"})
UNARY_LEVEL = len(_LEVELS) + 1
# quantifier sources stop before comparison so `in` is not swallowed
_SOURCE_LEVEL = PRECEDENCE["intersect"]


class _Parser:
    def __init__(self, text: str):
        self.ts = TokenStream(text)
        self.items = 0
        self.comment_index: list[tuple[int, str]] = []
        self._pending = list(self.ts.comments)

    # -------------------------------------------------------------- comments

    def _attach_comments(self) -> None:
        line = self.ts.peek.line
        while self._pending and self._pending[0][0] <= line:
            self.comment_index.append((self.items, self._pending.pop(0)[1]))

    def _start_item(self) -> None:
        self._attach_comments()
        self.items += 1

    # ------------------------------------------------------------- top level

    def spec(self) -> Specification:
        decls: list[Declaration] = []
        constraints: list[Expr] = []
        ts = self.ts
        while ts.peek.kind != "EOF":
            if ts.at("language"):
                ts.next()
                ts.expect_ident()
                while ts.peek.kind == "INT" or ts.at("."):
                    ts.next()
            elif ts.at("given", "find"):
                self._start_item()
                kw = ts.next().text
                names = self.names()
                ts.expect(":")
                dom = self.domain()
                cls = Given if kw == "given" else Find
                decls.extend(cls(n, dom) for n in names)
                self.items += len(names) - 1
            elif ts.at("letting"):
                self._start_item()
                ts.next()
                name = ts.expect_ident()
                ts.expect("be")
                if ts.accept("domain"):
                    decls.append(LettingDomain(name, self.domain()))
                else:
                    decls.append(LettingValue(name, self.expr()))
            elif ts.at("such"):
                ts.next()
                ts.expect("that")
                self._start_item()
                constraints.append(self.expr())
                while ts.accept(","):
                    self._start_item()
                    constraints.append(self.expr())
            else:
                ts.fail({"'given'", "'letting'", "'find'", "'such that'", "end of input"})
        while self._pending:
            self.comment_index.append((self.items, self._pending.pop(0)[1]))
        # indices count items in source order; the printer emits declarations
        # first, so they only drift when `such that` blocks interleave
        return Specification(tuple(decls), tuple(constraints), tuple(self.comment_index))

    def names(self) -> list[str]:
        names = [self.ts.expect_ident()]
        while self.ts.accept(","):
            names.append(self.ts.expect_ident())
        return names

    # --------------------------------------------------------------- domains

    def domain(self) -> Domain:
        ts = self.ts
        tok = ts.peek
        if tok.kind == "IDENT":
            ts.next()
            return NamedDomain(tok.text)
        if ts.accept("int"):
            if not ts.accept("("):
                return IntUnbounded()
            lo = None if ts.at("..") else self.expr()
            ts.expect("..")
            hi = None if ts.at(")") else self.expr()
            ts.expect(")")
            return IntRange(lo, hi)
        if ts.accept("relation"):
            attrs = self.attributes()
            ts.expect("of")
            ts.expect("(")
            comps = [self.domain()]
            while ts.accept("*"):
                comps.append(self.domain())
            ts.expect(")")
            if len(comps) != 2:
                raise ParseError("only binary relations are supported", tok.line, tok.col)
            return RelationDomain(attrs, tuple(comps))
        if ts.accept("set"):
            attrs = self.attributes()
            ts.expect("of")
            return SetDomain(attrs, self.domain())
        if ts.accept("function"):
            attrs = self.attributes()
            src = self.domain()
            ts.expect("-->")
            return FunctionDomain(attrs, src, self.domain())
        if ts.accept("tuple"):
            ts.expect("(")
            comps = [self.domain()]
            while ts.accept(","):
                comps.append(self.domain())
            ts.expect(")")
            return TupleDomain(tuple(comps))
        ts.fail({"domain"})

    def attributes(self) -> tuple[Attribute, ...]:
        ts = self.ts
        if not ts.accept("("):
            return ()
        attrs = [self.attribute()]
        while ts.accept(","):
            attrs.append(self.attribute())
        ts.expect(")")
        return tuple(attrs)

    def attribute(self) -> Attribute:
        tok = self.ts.peek
        name = self.ts.expect_ident()
        if name in ATTRIBUTES_WITH_ARG:
            return Attribute(name, self.expr())
        if name in ATTRIBUTES_WITHOUT_ARG:
            return Attribute(name)
        raise ParseError(f"unsupported attribute {name!r}", tok.line, tok.col,
                         frozenset(ATTRIBUTES_WITH_ARG | ATTRIBUTES_WITHOUT_ARG))

    # ----------------------------------------------------------- expressions

    def expr(self, level: int = 0) -> Expr:
        ts = self.ts
        if level == 0 and ts.at("forAll", "sum"):
            return self.quantifier()
        if level >= UNARY_LEVEL:
            return self.unary()
        if level == 0:
            level = 1
        ops, assoc = _LEVELS[level - 1]
        lhs = self.expr(level + 1)
        while ts.peek.kind in ("OP", "KW") and ts.peek.text in ops:
            op = ts.next().text
            rhs = self.expr(level if assoc == "right" else level + 1)
            lhs = BinOp(op, lhs, rhs)
            if assoc == "right":
                break
        return lhs

    def quantifier(self) -> Expr:
        ts = self.ts
        cls = ForAll if ts.next().text == "forAll" else Sum
        destructure = False
        if ts.accept("("):
            destructure = True
            binders = self.names()
            ts.expect(")")
            if len(binders) < 2:
                ts.fail({"','"}, "a destructuring binder needs at least two names")
        else:
            binders = self.names()
        if ts.accept(":"):
            source = OverDomain(self.domain())
        elif ts.accept("in"):
            source = OverCollection(self.expr(_SOURCE_LEVEL))
        else:
            ts.fail({"':'", "'in'"})
        ts.expect(".")
        return cls(tuple(binders), source, self.expr(), destructure)

    def unary(self) -> Expr:
        if self.ts.accept("!"):
            return Not(self.unary())
        return self.postfix()

    def postfix(self) -> Expr:
        ts = self.ts
        e = self.primary()
        while True:
            if ts.at("["):
                ts.next()
                idx = ts.peek
                index = ts.expect_int()
                if index < 1:
                    raise ParseError("tuple indices are 1-based", idx.line, idx.col)
                ts.expect("]")
                e = TupleIndex(e, index)
            elif ts.at("(") and isinstance(e, Ident):
                ts.next()
                args = [self.expr()]
                while ts.accept(","):
                    args.append(self.expr())
                ts.expect(")")
                e = Apply(e.name, tuple(args))
            else:
                return e

    def primary(self) -> Expr:
        ts = self.ts
        tok = ts.peek
        if tok.kind == "INT":
            ts.next()
            return IntLit(int(tok.text))
        if tok.kind == "IDENT":
            ts.next()
            return Ident(tok.text)
        if ts.at("-") and ts.peek_at(1).kind == "INT":
            ts.next()
            return IntLit(-int(ts.next().text))
        if ts.at("forAll", "sum"):
            return self.quantifier()
        if ts.accept("("):
            first = self.expr()
            if ts.accept(","):
                elems = [first, self.expr()]
                while ts.accept(","):
                    elems.append(self.expr())
                ts.expect(")")
                return TupleLit(tuple(elems))
            ts.expect(")")
            return first
        if ts.accept("{"):
            ts.expect("}")
            return EmptySet()
        if ts.at("toInt", "defined"):
            kw = ts.next().text
            ts.expect("(")
            inner = self.expr()
            ts.expect(")")
            return ToInt(inner) if kw == "toInt" else Defined(inner)
        ts.fail({"expression"})


def parse_spec(text: str, name: str = "spec", check: bool = True) -> Specification:
    """Parse Essence-subset source text.

    Raises ParseError on malformed input and, when ``check`` is set, ScopeError
    for identifiers used before they are declared.
    """
    spec = _Parser(text).spec()
    if name != "spec":
        spec = Specification(spec.declarations, spec.constraints, spec.comments, name)
    if check:
        from .scope import check_scope

        check_scope(spec)
    return spec


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    if p.ts.peek.kind != "EOF":
        p.ts.fail({"end of input"})
    return e


def parse_domain(text: str) -> Domain:
    p = _Parser(text)
    d = p.domain()
    if p.ts.peek.kind != "EOF":
        p.ts.fail({"end of input"})
    return d
