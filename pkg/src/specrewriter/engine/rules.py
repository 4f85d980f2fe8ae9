"""Rule and program types, and the parser for GP2-style `.gp2r` rule files.

The accepted language is the fragment of GP2 the shipped rules need::

    Main = Stage1; Stage2!; try r; {r1, r2}
    Stage1 = ruleA; ruleB
    ruleA(x, y: string; p: int)
    [ (n0, x) (n1, "find" # red) | (e0, n0, n1, p) ]
    =>
    [ (n0, x) (n1, x . "Set") | (e0, n0, n1, p) ]
    interface = {n0, n1}

Labels are single atoms: string/int literals or variables; right-hand sides
may also concatenate strings with ``.``. Lines starting with ``\\\\`` or ``//``
are comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Union

from ..errors import ParseError

VAR_TYPES = {"string": "string", "char": "string", "int": "int", "any": "any", "atom": "any"}


class UndeclaredVariable(ParseError):
    pass


class InterfaceMismatch(ParseError):
    pass


class UnknownRule(ParseError):
    pass


# ----------------------------------------------------------------- patterns


@dataclass(frozen=True)
class Lit:
    value: int | str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Concat:
    parts: tuple[Lit | Var, ...]


LabelPattern = Union[Lit, Var, Concat]


class MarkPattern(Enum):
    NONE = "none"
    RED = "red"
    ANY = "any"


@dataclass(frozen=True)
class PatternNode:
    id: str
    label: LabelPattern
    mark: MarkPattern = MarkPattern.NONE


@dataclass(frozen=True)
class PatternEdge:
    id: str
    src: str
    tgt: str
    label: LabelPattern


@dataclass(frozen=True)
class PatternGraph:
    nodes: tuple[PatternNode, ...] = ()
    edges: tuple[PatternEdge, ...] = ()

    @cached_property
    def node_ids(self) -> frozenset[str]:
        return frozenset(n.id for n in self.nodes)

    def node(self, id: str) -> PatternNode:
        return next(n for n in self.nodes if n.id == id)


def label_vars(label: LabelPattern) -> set[str]:
    if isinstance(label, Var):
        return {label.name}
    if isinstance(label, Concat):
        return {p.name for p in label.parts if isinstance(p, Var)}
    return set()


@dataclass(frozen=True)
class Rule:
    name: str
    params: tuple[tuple[str, str], ...]
    lhs: PatternGraph
    rhs: PatternGraph
    interface: frozenset[str]

    @cached_property
    def param_types(self) -> dict[str, str]:
        return dict(self.params)

    @cached_property
    def preserved_edges(self) -> frozenset[str]:
        """Edge ids present on both sides with the same endpoints."""
        rhs_ids = {e.id for e in self.rhs.edges}
        return frozenset(e.id for e in self.lhs.edges if e.id in rhs_ids)

    @cached_property
    def unused_params(self) -> tuple[str, ...]:
        used: set[str] = set()
        for x in self.lhs.nodes + self.lhs.edges:
            used |= label_vars(x.label)
        return tuple(p for p, _ in self.params if p not in used)


# ----------------------------------------------------------------- programs


@dataclass(frozen=True)
class Call:
    name: str


@dataclass(frozen=True)
class Seq:
    items: tuple[RuleProgram, ...]


@dataclass(frozen=True)
class Choice:
    names: tuple[str, ...]


@dataclass(frozen=True)
class Loop:
    body: RuleProgram


@dataclass(frozen=True)
class Try:
    body: RuleProgram


RuleProgram = Union[Call, Seq, Choice, Loop, Try]


def format_program(p: RuleProgram) -> str:
    match p:
        case Call(name):
            return name
        case Seq(items):
            return "; ".join(format_program(i) if not isinstance(i, Seq) else f"({format_program(i)})" for i in items)
        case Choice(names):
            return "{" + ", ".join(names) + "}"
        case Loop(body):
            inner = format_program(body)
            return f"{inner}!" if isinstance(body, (Call, Choice)) else f"({inner})!"
        case Try(body):
            inner = format_program(body)
            return f"try {inner}" if isinstance(body, (Call, Choice, Loop)) else f"try ({inner})"
    raise TypeError(p)


@dataclass
class RuleSet:
    """Rules plus named procedures; ``Main`` is the entry program."""

    rules: dict[str, Rule] = field(default_factory=dict)
    procedures: dict[str, RuleProgram] = field(default_factory=dict)

    @property
    def main(self) -> RuleProgram | None:
        return self.procedures.get("Main")

    def merge(self, other: RuleSet) -> RuleSet:
        """Later definitions win, so user files can override built-ins."""
        return RuleSet({**self.rules, **other.rules}, {**self.procedures, **other.procedures})

    def check(self) -> None:
        """Every name used by a program must resolve to a rule or procedure."""
        for proc, body in self.procedures.items():
            for name, is_choice in _names(body):
                if name in self.rules:
                    continue
                if name in self.procedures and not is_choice:
                    continue
                raise UnknownRule(f"procedure {proc!r} refers to unknown rule {name!r}")


def _names(p: RuleProgram):
    match p:
        case Call(name):
            yield name, False
        case Choice(names):
            for n in names:
                yield n, True
        case Seq(items):
            for i in items:
                yield from _names(i)
        case Loop(body) | Try(body):
            yield from _names(body)


# ------------------------------------------------------------------- parser

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>(?:\\\\|//)[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>=>|[\[\](){}|,;:=!\#.])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _RuleParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.peek.kind in ("punct", "ident") and self.peek.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> _Tok:
        if self.at(text):
            return self.next()
        self.fail({repr(text)})

    def fail(self, expected: set[str], message: str | None = None, tok: _Tok | None = None, cls=ParseError):
        tok = tok or self.peek
        shown = tok.text or "end of input"
        raise cls(message or f"unexpected {shown!r}", tok.line, tok.col, frozenset(expected))

    def ident(self) -> _Tok:
        if self.peek.kind == "ident":
            return self.next()
        self.fail({"identifier"})

    # ---------------------------------------------------------------- file

    def file(self) -> RuleSet:
        rs = RuleSet()
        while self.peek.kind != "eof":
            name_tok = self.ident()
            if self.at("="):
                self.next()
                if name_tok.text in rs.procedures:
                    self.fail(set(), f"duplicate procedure {name_tok.text!r}", name_tok)
                rs.procedures[name_tok.text] = self.program()
            elif self.at("("):
                if name_tok.text in rs.rules:
                    self.fail(set(), f"duplicate rule {name_tok.text!r}", name_tok)
                rs.rules[name_tok.text] = self.rule(name_tok)
            else:
                self.fail({"'='", "'('"})
        return rs

    # ------------------------------------------------------------- program

    def program(self) -> RuleProgram:
        items = [self.seq_item()]
        while self.accept(";"):
            items.append(self.seq_item())
        return items[0] if len(items) == 1 else Seq(tuple(items))

    def seq_item(self) -> RuleProgram:
        if self.accept("try"):
            return Try(self.seq_item())
        if self.accept("("):
            body = self.program()
            self.expect(")")
        elif self.accept("{"):
            names = [self.ident().text]
            while self.accept(","):
                names.append(self.ident().text)
            self.expect("}")
            body = Choice(tuple(names))
        else:
            tok = self.ident()
            if tok.text in ("if", "then", "else", "or", "skip", "fail", "break"):
                self.fail(set(), f"unsupported control construct {tok.text!r}", tok)
            # a name followed by `=` or `(` starts the next declaration
            body = Call(tok.text)
        while self.accept("!"):
            body = Loop(body)
        return body

    # ---------------------------------------------------------------- rule

    def rule(self, name_tok: _Tok) -> Rule:
        self.expect("(")
        params: list[tuple[str, str]] = []
        if not self.at(")"):
            while True:
                group = [self.ident()]
                while self.accept(","):
                    group.append(self.ident())
                self.expect(":")
                type_tok = self.ident()
                if type_tok.text not in VAR_TYPES:
                    self.fail(set(VAR_TYPES), f"unsupported variable type {type_tok.text!r}", type_tok)
                for g in group:
                    if any(g.text == p for p, _ in params):
                        self.fail(set(), f"duplicate parameter {g.text!r}", g)
                    params.append((g.text, VAR_TYPES[type_tok.text]))
                if not self.accept(";"):
                    break
        self.expect(")")
        declared = {p for p, _ in params}
        lhs = self.graph(declared, side="lhs")
        self.expect("=>")
        rhs_tok = self.peek
        rhs = self.graph(declared, side="rhs")
        self.expect("interface")
        self.expect("=")
        self.expect("{")
        iface_tok = self.peek
        interface: list[str] = []
        if not self.at("}"):
            interface.append(self._id())
            while self.accept(","):
                interface.append(self._id())
        self.expect("}")
        rule = Rule(name_tok.text, tuple(params), lhs, rhs, frozenset(interface))
        self._validate(rule, rhs_tok, iface_tok)
        return rule

    def _id(self) -> str:
        tok = self.next()
        if tok.kind not in ("ident", "int"):
            self.fail({"identifier"}, tok=tok)
        return tok.text

    def graph(self, declared: set[str], side: str) -> PatternGraph:
        self.expect("[")
        nodes: list[PatternNode] = []
        edges: list[PatternEdge] = []
        seen: set[str] = set()
        while self.at("("):
            self.next()
            tok = self.peek
            nid = self._id()
            if nid in seen:
                self.fail(set(), f"duplicate node id {nid!r}", tok)
            seen.add(nid)
            self.expect(",")
            label = self.label(declared, side)
            mark = MarkPattern.NONE
            if self.accept("#"):
                mtok = self.ident()
                if mtok.text not in ("red", "any"):
                    self.fail({"red", "any"}, f"unsupported mark {mtok.text!r}", mtok)
                mark = MarkPattern(mtok.text)
                if side == "rhs" and mark is MarkPattern.ANY:
                    self.fail(set(), "right-hand sides need a concrete mark", mtok)
            self.expect(")")
            nodes.append(PatternNode(nid, label, mark))
        self.expect("|")
        eseen: set[str] = set()
        while self.at("("):
            self.next()
            tok = self.peek
            eid = self._id()
            if eid in eseen:
                self.fail(set(), f"duplicate edge id {eid!r}", tok)
            eseen.add(eid)
            self.expect(",")
            ends = []
            for _ in range(2):
                etok = self.peek
                end = self._id()
                if end not in seen:
                    self.fail(set(), f"edge {eid!r} refers to unknown node {end!r}", etok)
                ends.append(end)
                self.expect(",")
            label = self.label(declared, side)
            if self.at("#"):
                self.fail(set(), "edge marks are not supported")
            self.expect(")")
            edges.append(PatternEdge(eid, ends[0], ends[1], label))
        self.expect("]")
        return PatternGraph(tuple(nodes), tuple(edges))

    def label(self, declared: set[str], side: str) -> LabelPattern:
        parts = [self.atom(declared)]
        while self.at("."):
            dot = self.next()
            if side == "lhs":
                self.fail(set(), "string concatenation is only allowed on right-hand sides", dot)
            parts.append(self.atom(declared))
        if self.at(":"):
            self.fail(set(), "list labels are not supported")
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def atom(self, declared: set[str]) -> Lit | Var:
        tok = self.next()
        if tok.kind == "string":
            return Lit(bytes(tok.text[1:-1], "utf-8").decode("unicode_escape"))
        if tok.kind == "int":
            return Lit(int(tok.text))
        if tok.kind == "ident":
            if tok.text == "empty":
                self.fail(set(), "empty labels are not supported; use \"\"", tok)
            if tok.text not in declared:
                self.fail(set(), f"undeclared variable {tok.text!r}", tok, cls=UndeclaredVariable)
            return Var(tok.text)
        self.fail({"string", "integer", "variable"}, tok=tok)

    def _validate(self, rule: Rule, rhs_tok: _Tok, iface_tok: _Tok) -> None:
        lhs_vars: set[str] = set()
        for x in rule.lhs.nodes + rule.lhs.edges:
            lhs_vars |= label_vars(x.label)
        for x in rule.rhs.nodes + rule.rhs.edges:
            missing = label_vars(x.label) - lhs_vars
            if missing:
                self.fail(set(), f"right-hand side of {rule.name!r} uses {sorted(missing)} not bound on the left",
                          rhs_tok, cls=UndeclaredVariable)
        types = rule.param_types
        for x in rule.rhs.nodes + rule.rhs.edges:
            if isinstance(x.label, Concat):
                for p in x.label.parts:
                    if isinstance(p, Var) and types[p.name] == "int":
                        self.fail(set(), f"cannot concatenate int variable {p.name!r}", rhs_tok)
        lhs_ids, rhs_ids = rule.lhs.node_ids, rule.rhs.node_ids
        for nid in rule.interface:
            if nid not in lhs_ids or nid not in rhs_ids:
                self.fail(set(), f"interface node {nid!r} missing from one side of {rule.name!r}",
                          iface_tok, cls=InterfaceMismatch)
        for nid in lhs_ids & rhs_ids:
            if nid not in rule.interface:
                self.fail(set(), f"node {nid!r} appears on both sides of {rule.name!r} but not in the interface",
                          iface_tok, cls=InterfaceMismatch)
        lhs_edges = {e.id: e for e in rule.lhs.edges}
        for e in rule.rhs.edges:
            if e.id in lhs_edges:
                le = lhs_edges[e.id]
                if (le.src, le.tgt) != (e.src, e.tgt):
                    self.fail(set(), f"edge {e.id!r} changes endpoints; give the new edge a fresh id",
                              rhs_tok, cls=InterfaceMismatch)


def parse_rule_file(text: str) -> RuleSet:
    """Parse a rule file into its rules and procedures (including ``Main``)."""
    return _RuleParser(text).file()
