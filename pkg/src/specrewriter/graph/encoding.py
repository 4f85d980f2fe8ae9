"""Specification <-> host graph.

Every AST node becomes a graph node labelled with its symbol (identifier,
operator glyph, literal, keyword, or ``""``). Its grammatical kind lives on a
separate leaf reached through an edge labelled ``"kind"``. Children hang off
edges labelled with their 1-based position. The root carries the spec name
and kind ``"spec"``; its children are the declarations, then the constraints.
"""

from __future__ import annotations

from ..errors import DecodeError
from ..essence.ast import (
    BINARY_OPS, Apply, Attribute, BinOp, Declaration, Defined, Domain, EmptySet, Expr, Find,
    ForAll, FunctionDomain, Given, Ident, IntLit, IntRange, IntUnbounded, LettingDomain,
    LettingValue, NamedDomain, Not, OverCollection, OverDomain, RelationDomain, SetDomain,
    Specification, Sum, ToInt, TupleDomain, TupleIndex, TupleLit,
)
from .labeled import KIND, Atom, LabeledGraph, Mark

DECLARATION_KINDS = frozenset({"given", "find", "lettingDomain", "lettingValue"})
EXPRESSION_KINDS = frozenset({
    "intLit", "ident", "tupleLit", "emptySet", "binop", "not", "index", "apply",
    "forAll", "sum", "toInt", "defined",
})


class _Builder:
    def __init__(self):
        self.g = LabeledGraph()

    def node(self, symbol: Atom, kind: str, children=()) -> int:
        nid = self.g.add_node(symbol)
        leaf = self.g.add_node(kind)
        self.g.add_edge(nid, leaf, KIND)
        for pos, build in enumerate(children, start=1):
            child = build()
            self.g.add_edge(nid, child, pos)
        return nid

    def declaration(self, d: Declaration) -> int:
        match d:
            case Given(_, dom):
                kw, kind, inner = "given", "given", lambda: self.domain(dom)
            case Find(_, dom):
                kw, kind, inner = "find", "find", lambda: self.domain(dom)
            case LettingDomain(_, dom):
                kw, kind, inner = "letting", "lettingDomain", lambda: self.domain(dom)
            case LettingValue(_, e):
                kw, kind, inner = "letting", "lettingValue", lambda: self.expr(e)
        return self.node(kw, kind, [lambda: self.node(d.name, "name", [inner])])

    def attrs(self, attrs: tuple[Attribute, ...]) -> int:
        return self.node("", "attributes", [
            (lambda a=a: self.node(a.name, "attribute", [] if a.arg is None else [lambda: self.expr(a.arg)]))
            for a in attrs
        ])

    def domain(self, d: Domain) -> int:
        match d:
            case IntUnbounded():
                return self.node("int", "intUnbounded")
            case IntRange(lo, hi):
                return self.node("int", "intRange", [lambda: self.bound(lo), lambda: self.bound(hi)])
            case NamedDomain(name):
                return self.node(name, "domainRef")
            case RelationDomain(attrs, comps):
                return self.node("relation", "relation",
                                 [lambda: self.attrs(attrs)] + [(lambda c=c: self.domain(c)) for c in comps])
            case SetDomain(attrs, elem):
                return self.node("set", "set", [lambda: self.attrs(attrs), lambda: self.domain(elem)])
            case FunctionDomain(attrs, src, tgt):
                return self.node("function", "function",
                                 [lambda: self.attrs(attrs), lambda: self.domain(src), lambda: self.domain(tgt)])
            case TupleDomain(comps):
                return self.node("tuple", "tupleDomain", [(lambda c=c: self.domain(c)) for c in comps])
        raise TypeError(d)

    def bound(self, e: Expr | None) -> int:
        return self.node("", "none") if e is None else self.expr(e)

    def expr(self, e: Expr) -> int:
        match e:
            case IntLit(v):
                return self.node(v, "intLit")
            case Ident(name):
                return self.node(name, "ident")
            case EmptySet():
                return self.node("{}", "emptySet")
            case TupleLit(elems):
                return self.node("tuple", "tupleLit", [(lambda x=x: self.expr(x)) for x in elems])
            case BinOp(op, lhs, rhs):
                return self.node(op, "binop", [lambda: self.expr(lhs), lambda: self.expr(rhs)])
            case Not(x):
                return self.node("!", "not", [lambda: self.expr(x)])
            case ToInt(x):
                return self.node("toInt", "toInt", [lambda: self.expr(x)])
            case Defined(x):
                return self.node("defined", "defined", [lambda: self.expr(x)])
            case TupleIndex(x, i):
                return self.node("[]", "index", [lambda: self.expr(x), lambda: self.node(i, "intLit")])
            case Apply(fn, args):
                return self.node(fn, "apply", [(lambda a=a: self.expr(a)) for a in args])
            case ForAll() | Sum():
                kw = "forAll" if isinstance(e, ForAll) else "sum"
                return self.node(kw, kw, [
                    lambda: self.node("tuple" if e.destructure else "", "binders",
                                      [(lambda b=b: self.node(b, "binder")) for b in e.binders]),
                    lambda: self.source(e.source),
                    lambda: self.expr(e.body),
                ])
        raise TypeError(e)

    def source(self, s) -> int:
        match s:
            case OverDomain(dom):
                return self.node(":", "overDomain", [lambda: self.domain(dom)])
            case OverCollection(coll):
                return self.node("in", "overCollection", [lambda: self.expr(coll)])
        raise TypeError(s)


def encode(spec: Specification, name: str | None = None) -> LabeledGraph:
    """Encode ``spec`` as a host graph; ids are assigned in pre-order."""
    b = _Builder()
    items = [(lambda d=d: b.declaration(d)) for d in spec.declarations]
    items += [(lambda c=c: b.expr(c)) for c in spec.constraints]
    b.node(name or spec.name, "spec", items)
    return b.g


# ------------------------------------------------------------------ decode


class _Reader:
    def __init__(self, g: LabeledGraph):
        self.g = g
        self.kinds: dict[int, str] = {}
        self.kind_leaves: set[int] = set()
        self.visited: set[int] = set()

    def prepare(self) -> int:
        g = self.g
        for n in g.nodes.values():
            if n.mark is not Mark.NONE:
                raise DecodeError(n.id, "dangling mark: marked nodes cannot be decoded")
        for n in sorted(g.nodes):
            kind_edges = [e for e in g.out_edges(n) if e.label == KIND]
            if len(kind_edges) > 1:
                raise DecodeError(n, "more than one kind branch")
            if kind_edges:
                leaf = kind_edges[0].tgt
                label = g.nodes[leaf].label
                if g.out_edges(leaf) or len(g.in_edges(leaf)) != 1 or not isinstance(label, str):
                    raise DecodeError(leaf, "malformed kind leaf")
                self.kinds[n] = label
                self.kind_leaves.add(leaf)
        roots = [n for n, k in self.kinds.items() if k == "spec"]
        if len(roots) != 1:
            raise DecodeError(roots[1] if roots else None, f"expected exactly one spec root, found {len(roots)}")
        root = roots[0]
        if g.in_edges(root):
            raise DecodeError(root, "spec root has a parent")
        return root

    def children(self, n: int) -> list[int]:
        if n in self.visited:
            raise DecodeError(n, "cycle or shared subtree")
        self.visited.add(n)
        by_pos: dict[int, int] = {}
        for e in self.g.out_edges(n):
            if e.label == KIND:
                continue
            if not isinstance(e.label, int) or isinstance(e.label, bool):
                raise DecodeError(n, f"edge {e.id} has non-positional label {e.label!r}")
            if e.label in by_pos:
                raise DecodeError(n, f"duplicate child position {e.label}")
            by_pos[e.label] = e.tgt
        for pos in range(1, len(by_pos) + 1):
            if pos not in by_pos:
                raise DecodeError(n, f"missing child position {pos}")
        return [by_pos[p] for p in range(1, len(by_pos) + 1)]

    def kind(self, n: int) -> str:
        if n not in self.kinds:
            raise DecodeError(n, "node has no kind branch")
        return self.kinds[n]

    def symbol(self, n: int, typ=str) -> Atom:
        label = self.g.nodes[n].label
        if typ is int and (not isinstance(label, int) or isinstance(label, bool)):
            raise DecodeError(n, f"expected an integer label, got {label!r}")
        if typ is str and not isinstance(label, str):
            raise DecodeError(n, f"expected a string label, got {label!r}")
        return label

    def expect(self, n: int, kinds, arity=None, symbol=None) -> list[int]:
        kind = self.kind(n)
        if isinstance(kinds, str):
            kinds = (kinds,)
        if kind not in kinds:
            raise DecodeError(n, f"unexpected kind {kind!r}, wanted one of {sorted(kinds)}")
        if symbol is not None and self.g.nodes[n].label != symbol:
            raise DecodeError(n, f"kind {kind!r} must carry symbol {symbol!r}")
        kids = self.children(n)
        if arity is not None:
            lo, hi = arity if isinstance(arity, tuple) else (arity, arity)
            if len(kids) < lo or (hi is not None and len(kids) > hi):
                raise DecodeError(n, f"kind {kind!r} has {len(kids)} children")
        return kids

    def spec(self, root: int) -> Specification:
        decls, constraints = [], []
        for child in self.expect(root, "spec"):
            kind = self.kind(child)
            if kind in DECLARATION_KINDS:
                decls.append(self.declaration(child))
            elif kind in EXPRESSION_KINDS:
                constraints.append(self.expr(child))
            else:
                raise DecodeError(child, f"unknown kind {kind!r} under spec root")
        return Specification(tuple(decls), tuple(constraints), name=str(self.g.nodes[root].label))

    def declaration(self, n: int) -> Declaration:
        kind = self.kind(n)
        keyword = {"given": "given", "find": "find", "lettingDomain": "letting", "lettingValue": "letting"}[kind]
        (name_node,) = self.expect(n, kind, 1, symbol=keyword)
        (inner,) = self.expect(name_node, "name", 1)
        name = self.symbol(name_node)
        if kind == "lettingValue":
            return LettingValue(name, self.expr(inner))
        cls = {"given": Given, "find": Find, "lettingDomain": LettingDomain}[kind]
        return cls(name, self.domain(inner))

    def attrs(self, n: int) -> tuple[Attribute, ...]:
        out = []
        for a in self.expect(n, "attributes"):
            kids = self.expect(a, "attribute", (0, 1))
            out.append(Attribute(self.symbol(a), self.expr(kids[0]) if kids else None))
        return tuple(out)

    def domain(self, n: int) -> Domain:
        kind = self.kind(n)
        match kind:
            case "intUnbounded":
                self.expect(n, kind, 0, symbol="int")
                return IntUnbounded()
            case "intRange":
                lo, hi = self.expect(n, kind, 2, symbol="int")
                return IntRange(self.bound(lo), self.bound(hi))
            case "domainRef":
                self.expect(n, kind, 0)
                return NamedDomain(self.symbol(n))
            case "relation":
                kids = self.expect(n, kind, 3, symbol="relation")
                return RelationDomain(self.attrs(kids[0]), tuple(self.domain(c) for c in kids[1:]))
            case "set":
                a, elem = self.expect(n, kind, 2, symbol="set")
                return SetDomain(self.attrs(a), self.domain(elem))
            case "function":
                a, src, tgt = self.expect(n, kind, 3, symbol="function")
                return FunctionDomain(self.attrs(a), self.domain(src), self.domain(tgt))
            case "tupleDomain":
                kids = self.expect(n, kind, (1, None), symbol="tuple")
                return TupleDomain(tuple(self.domain(c) for c in kids))
        raise DecodeError(n, f"unknown domain kind {kind!r}")

    def bound(self, n: int) -> Expr | None:
        if self.kind(n) == "none":
            self.expect(n, "none", 0)
            return None
        return self.expr(n)

    def expr(self, n: int) -> Expr:
        kind = self.kind(n)
        match kind:
            case "intLit":
                self.expect(n, kind, 0)
                return IntLit(self.symbol(n, int))
            case "ident":
                self.expect(n, kind, 0)
                return Ident(self.symbol(n))
            case "emptySet":
                self.expect(n, kind, 0, symbol="{}")
                return EmptySet()
            case "tupleLit":
                kids = self.expect(n, kind, (2, None), symbol="tuple")
                return TupleLit(tuple(self.expr(k) for k in kids))
            case "binop":
                op = self.symbol(n)
                if op not in BINARY_OPS:
                    raise DecodeError(n, f"unknown operator {op!r}")
                lhs, rhs = self.expect(n, kind, 2)
                return BinOp(op, self.expr(lhs), self.expr(rhs))
            case "not":
                (x,) = self.expect(n, kind, 1, symbol="!")
                return Not(self.expr(x))
            case "toInt":
                (x,) = self.expect(n, kind, 1, symbol="toInt")
                return ToInt(self.expr(x))
            case "defined":
                (x,) = self.expect(n, kind, 1, symbol="defined")
                return Defined(self.expr(x))
            case "index":
                x, i = self.expect(n, kind, 2, symbol="[]")
                self.expect(i, "intLit", 0)
                index = self.symbol(i, int)
                if index < 1:
                    raise DecodeError(i, "tuple index must be >= 1")
                return TupleIndex(self.expr(x), index)
            case "apply":
                kids = self.expect(n, kind, (1, None))
                return Apply(self.symbol(n), tuple(self.expr(k) for k in kids))
            case "forAll" | "sum":
                b, s, body = self.expect(n, kind, 3, symbol=kind)
                binders_kind = self.g.nodes[b].label
                names = self.expect(b, "binders", (1, None))
                if binders_kind not in ("tuple", ""):
                    raise DecodeError(b, f"binders symbol must be 'tuple' or '', got {binders_kind!r}")
                binders = []
                for name in names:
                    self.expect(name, "binder", 0)
                    binders.append(self.symbol(name))
                cls = ForAll if kind == "forAll" else Sum
                return cls(tuple(binders), self.source(s), self.expr(body), binders_kind == "tuple")
        raise DecodeError(n, f"unknown expression kind {kind!r}")

    def source(self, n: int):
        kind = self.kind(n)
        if kind == "overDomain":
            (d,) = self.expect(n, kind, 1)
            return OverDomain(self.domain(d))
        if kind == "overCollection":
            (e,) = self.expect(n, kind, 1)
            return OverCollection(self.expr(e))
        raise DecodeError(n, f"unknown quantifier source kind {kind!r}")


def decode(g: LabeledGraph) -> Specification:
    """Rebuild a Specification; DecodeError names the first offending node.

    Declarations and constraints may interleave under the root: children are
    read in position order and split by kind, keeping relative order.
    """
    r = _Reader(g)
    root = r.prepare()
    spec = r.spec(root)
    stray = set(g.nodes) - r.visited - r.kind_leaves
    if stray:
        raise DecodeError(min(stray), "node unreachable from the spec root")
    return spec
