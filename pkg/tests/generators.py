"""Seeded random generators shared by the property tests and the acceptance suite.

Each takes a ``random.Random`` so callers can run a fixed number of
reproducible cases, or drive them from hypothesis via ``st.randoms()``.
"""

from __future__ import annotations

import itertools
import random

from specrewriter.engine import (Lit, MarkPattern, PatternEdge, PatternGraph, PatternNode, Rule, Var)
from specrewriter.essence.ast import (
    Apply, Attribute, BinOp, Defined, EmptySet, Find, ForAll, FunctionDomain, Given, Ident, IntLit, IntRange,
    IntUnbounded, LettingDomain, LettingValue, NamedDomain, Not, OverCollection, OverDomain, RelationDomain,
    SetDomain, Specification, Sum, ToInt, TupleDomain, TupleIndex, TupleLit,
)
from specrewriter.graph import LabeledGraph, Mark

# ------------------------------------------------------------ specifications

# value types used to keep generated expressions meaningful
INT, PAIR, REL, SET, FN_SET, FN_INT = "int", "pair", "rel", "set", "fn_set", "fn_int"

WORDS = ["n", "m", "k", "edges", "colours", "verts", "size2", "alpha", "beta", "x1", "y_2", "gamma", "delta"]


class _SpecGen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.names = itertools.count()
        self.values: dict[str, str] = {}   # name -> value type, for expressions
        self.int_domains: list[str] = []
        self.set_domains: list[str] = []   # named `set of <int domain>` domains
        self.finds: dict[str, str] = {}

    def fresh(self) -> str:
        return f"{self.rng.choice(WORDS)}{next(self.names)}"

    # ---- expressions over the declarations seen so far
    def int_expr(self, depth: int, scope: dict[str, str]) -> object:
        rng = self.rng
        ints = [n for n, t in scope.items() if t == INT]
        options = ["lit"] + (["ident"] * 3 if ints else [])
        if depth > 0:
            options += ["arith", "arith", "toint"]
            if any(t in (REL, SET) for t in scope.values()):
                options.append("sum")
            if any(t == PAIR for t in scope.values()):
                options.append("index")
            if any(t == FN_INT for t in scope.values()):
                options.append("apply")
        kind = rng.choice(options)
        if kind == "lit":
            return IntLit(rng.randint(-3, 12))
        if kind == "ident":
            return Ident(rng.choice(ints))
        if kind == "arith":
            return BinOp(rng.choice("+-*"), self.int_expr(depth - 1, scope), self.int_expr(depth - 1, scope))
        if kind == "toint":
            return ToInt(self.bool_expr(depth - 1, scope))
        if kind == "index":
            return TupleIndex(Ident(rng.choice([n for n, t in scope.items() if t == PAIR])), rng.randint(1, 2))
        if kind == "apply":
            fn = rng.choice([n for n, t in scope.items() if t == FN_INT])
            return Apply(fn, (self.int_expr(depth - 1, scope),))
        return self.quantifier(Sum, depth, scope)

    def bool_expr(self, depth: int, scope: dict[str, str]) -> object:
        rng = self.rng
        options = ["cmp"]
        if depth > 0:
            options += ["logic", "not", "forall", "forall"]
            if any(t in (REL, SET) for t in scope.values()):
                options.append("in")
            if any(t == FN_SET for t in scope.values()):
                options.append("intersect")
            if any(t == REL for t in scope.values()):
                options.append("relapply")
        kind = rng.choice(options)
        if kind == "cmp":
            return BinOp(rng.choice(["=", "!="]), self.int_expr(depth - 1, scope), self.int_expr(depth - 1, scope))
        if kind == "logic":
            return BinOp(rng.choice(["->", "/\\"]), self.bool_expr(depth - 1, scope),
                         self.bool_expr(depth - 1, scope))
        if kind == "not":
            return Not(self.bool_expr(depth - 1, scope))
        if kind == "in":
            coll = rng.choice([n for n, t in scope.items() if t in (REL, SET)])
            if scope[coll] == REL:
                elem = TupleLit((self.int_expr(0, scope), self.int_expr(0, scope)))
            else:
                elem = self.int_expr(depth - 1, scope)
            return BinOp("in", elem, Ident(coll))
        if kind == "intersect":
            fn = rng.choice([n for n, t in scope.items() if t == FN_SET])
            lhs = BinOp("intersect", Apply(fn, (self.int_expr(0, scope),)), Apply(fn, (self.int_expr(0, scope),)))
            return BinOp("=", lhs, EmptySet())
        if kind == "relapply":
            rel = rng.choice([n for n, t in scope.items() if t == REL])
            return Apply(rel, (self.int_expr(0, scope), self.int_expr(0, scope)))
        return self.quantifier(ForAll, depth, scope)

    def quantifier(self, cls, depth: int, scope: dict[str, str]):
        rng = self.rng
        colls = [n for n, t in scope.items() if t in (REL, SET)]
        fn_sets = [n for n, t in scope.items() if t == FN_SET]
        choices = []
        if self.int_domains:
            choices.append("domain")
        if colls:
            choices.append("coll")
        if fn_sets:
            choices.append("defined")
        if not choices:
            choices.append("inline")
        how = rng.choice(choices)
        inner = dict(scope)
        destructure = False
        if how == "domain" or how == "inline":
            domain = NamedDomain(rng.choice(self.int_domains)) if how == "domain" else IntRange(
                IntLit(0), IntLit(rng.randint(0, 3)))
            binders = tuple(self.fresh() for _ in range(rng.randint(1, 2)))
            for b in binders:
                inner[b] = INT
            source = OverDomain(domain)
        elif how == "defined":
            binders = (self.fresh(),)
            inner[binders[0]] = INT
            source = OverCollection(Defined(Ident(rng.choice(fn_sets))))
        else:
            coll = rng.choice(colls)
            source = OverCollection(Ident(coll))
            if scope[coll] == REL and rng.random() < 0.5:
                binders, destructure = (self.fresh(), self.fresh()), True
                inner.update({b: INT for b in binders})
            else:
                binders = (self.fresh(),)
                inner[binders[0]] = PAIR if scope[coll] == REL else INT
        body = self.bool_expr(depth - 1, inner) if cls is ForAll else self.int_expr(depth - 1, inner)
        return cls(binders, source, body, destructure)

    # ---- declarations
    def int_domain(self):
        rng = self.rng
        ints = {n: t for n, t in self.values.items() if t == INT and n not in self.finds}
        if rng.random() < 0.15:
            return IntUnbounded()
        lo = None if rng.random() < 0.1 else self.int_expr(1, ints)
        hi = None if rng.random() < 0.2 else self.int_expr(1, ints)
        return IntRange(lo, hi)

    def elem_domain(self):
        if self.int_domains and self.rng.random() < 0.7:
            return NamedDomain(self.rng.choice(self.int_domains))
        return IntRange(IntLit(0), IntLit(self.rng.randint(0, 4)))

    def attrs(self, allowed: list[str]) -> tuple[Attribute, ...]:
        rng = self.rng
        params = {n: t for n, t in self.values.items() if t == INT and n not in self.finds}
        out = []
        for name in allowed:
            if rng.random() < 0.4:
                out.append(Attribute(name, self.int_expr(1, params) if name == "size" else None))
        return tuple(out)

    def typed_domain(self):
        rng = self.rng
        kind = rng.choice([INT, REL, SET, FN_SET, FN_INT, PAIR])
        if kind == INT:
            return kind, self.int_domain()
        if kind == REL:
            return kind, RelationDomain(self.attrs(["size", "irreflexive"]), (self.elem_domain(), self.elem_domain()))
        if kind == SET:
            return kind, SetDomain(self.attrs(["size"]), self.elem_domain())
        if kind == PAIR:
            return kind, TupleDomain((self.elem_domain(), self.elem_domain()))
        if kind == FN_INT:
            return kind, FunctionDomain(self.attrs(["total"]), self.elem_domain(), self.elem_domain())
        target = NamedDomain(rng.choice(self.set_domains)) if self.set_domains and rng.random() < 0.6 else \
            SetDomain(self.attrs(["size"]), self.elem_domain())
        return kind, FunctionDomain(self.attrs(["total"]), self.elem_domain(), target)

    def spec(self) -> Specification:
        rng = self.rng
        decls = []
        for _ in range(rng.randint(0, 8)):
            roll = rng.random()
            name = self.fresh()
            params = {n: t for n, t in self.values.items() if n not in self.finds}
            if roll < 0.3:
                kind, domain = self.typed_domain()
                decls.append(Given(name, domain))
                self.values[name] = kind
            elif roll < 0.45:
                decls.append(LettingDomain(name, self.int_domain()))
                self.int_domains.append(name)
            elif roll < 0.55:
                decls.append(LettingDomain(name, SetDomain(self.attrs(["size"]), self.elem_domain())))
                self.set_domains.append(name)
            elif roll < 0.65:
                decls.append(LettingValue(name, self.int_expr(2, {n: t for n, t in params.items()})))
                self.values[name] = INT
            else:
                kind, domain = self.typed_domain()
                decls.append(Find(name, domain))
                self.values[name] = kind
                self.finds[name] = kind
        constraints = tuple(self.bool_expr(rng.randint(0, 4), dict(self.values)) for _ in range(rng.randint(0, 4)))
        items = len(decls) + len(constraints)
        comments = ()
        if items:
            comments = tuple(sorted({(rng.randrange(items), f"note {i}") for i in range(rng.randint(0, 2))}))
        return Specification(tuple(decls), constraints, comments=comments)


def random_spec(rng: random.Random) -> Specification:
    """A well-scoped specification in the supported subset."""
    return _SpecGen(rng).spec()


# ------------------------------------------------------------- graph rewriting

NODE_LABELS = ["a", "b", 1, 2]
EDGE_LABELS = [1, 2, "kind"]


def random_host(rng: random.Random, max_nodes: int = 7, max_edges: int = 10) -> LabeledGraph:
    g = LabeledGraph()
    for _ in range(rng.randint(0, max_nodes)):
        g.add_node(rng.choice(NODE_LABELS), Mark.RED if rng.random() < 0.25 else Mark.NONE)
    ids = sorted(g.nodes)
    if ids:
        for _ in range(rng.randint(0, max_edges)):
            g.add_edge(rng.choice(ids), rng.choice(ids), rng.choice(EDGE_LABELS))
    return g


def _label(rng: random.Random, pool: list, vars_: dict[str, str], allow_new: bool):
    if vars_ and rng.random() < 0.4:
        return Var(rng.choice(sorted(vars_)))
    if allow_new and rng.random() < 0.3:
        name = f"v{len(vars_)}"
        vars_[name] = rng.choice(["any", "any", "string", "int"])
        return Var(name)
    return Lit(rng.choice(pool))


def random_rule(rng: random.Random, name: str = "r") -> Rule:
    """A valid rule over the small label alphabet; may delete, keep or create items."""
    vars_: dict[str, str] = {}
    lhs_nodes = []
    for i in range(rng.randint(1, 3)):
        mark = rng.choice([MarkPattern.NONE, MarkPattern.NONE, MarkPattern.RED, MarkPattern.ANY])
        lhs_nodes.append(PatternNode(f"n{i}", _label(rng, NODE_LABELS, vars_, True), mark))
    ids = [n.id for n in lhs_nodes]
    lhs_edges = [PatternEdge(f"e{i}", rng.choice(ids), rng.choice(ids), _label(rng, EDGE_LABELS, vars_, True))
                 for i in range(rng.randint(0, 3))]
    interface = frozenset(i for i in ids if rng.random() < 0.6)

    rhs_nodes = []
    for n in lhs_nodes:
        if n.id in interface:
            label = n.label if rng.random() < 0.6 else _label(rng, NODE_LABELS, vars_, False)
            rhs_nodes.append(PatternNode(n.id, label, rng.choice([MarkPattern.NONE, MarkPattern.RED])))
    for i in range(rng.randint(0, 2)):
        rhs_nodes.append(PatternNode(f"c{i}", _label(rng, NODE_LABELS, vars_, False),
                                     rng.choice([MarkPattern.NONE, MarkPattern.RED])))
    rhs_ids = [n.id for n in rhs_nodes]
    rhs_edges = [e for e in lhs_edges if e.src in interface and e.tgt in interface and rng.random() < 0.5]
    if rhs_ids:
        for i in range(rng.randint(0, 2)):
            rhs_edges.append(PatternEdge(f"f{i}", rng.choice(rhs_ids), rng.choice(rhs_ids),
                                         _label(rng, EDGE_LABELS, vars_, False)))
    params = tuple(sorted(vars_.items()))
    return Rule(name, params, PatternGraph(tuple(lhs_nodes), tuple(lhs_edges)),
                PatternGraph(tuple(rhs_nodes), tuple(rhs_edges)), interface)


def _instantiate(pattern, assignment: dict, types: dict[str, str], rng: random.Random, pool: list):
    if isinstance(pattern, Lit):
        return pattern.value
    name = pattern.name
    if name not in assignment:
        typ = types[name]
        options = [v for v in pool if typ == "any" or (typ == "int") == isinstance(v, int)]
        assignment[name] = rng.choice(options or pool)
    return assignment[name]


def random_pair(rng: random.Random, name: str = "r") -> tuple[Rule, LabeledGraph]:
    """A rule plus a host that contains at least one copy of its left-hand side.

    Extra random nodes and edges are mixed in, so some planted copies are
    blocked by the dangling condition and others are not.
    """
    rule = random_rule(rng, name)
    host = random_host(rng, max_nodes=4, max_edges=4)
    assignment: dict = {}
    image = {}
    for pn in rule.lhs.nodes:
        mark = {MarkPattern.RED: Mark.RED, MarkPattern.NONE: Mark.NONE}.get(pn.mark) or rng.choice(list(Mark))
        image[pn.id] = host.add_node(_instantiate(pn.label, assignment, rule.param_types, rng, NODE_LABELS), mark)
    for pe in rule.lhs.edges:
        host.add_edge(image[pe.src], image[pe.tgt],
                      _instantiate(pe.label, assignment, rule.param_types, rng, EDGE_LABELS))
    ids = sorted(host.nodes)
    for _ in range(rng.randint(0, 3)):
        host.add_edge(rng.choice(ids), rng.choice(ids), rng.choice(EDGE_LABELS))
    return rule, host
