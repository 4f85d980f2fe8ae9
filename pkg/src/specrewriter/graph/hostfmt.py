"""GP2 host-graph text: ``[ (id, label[#mark]) ... | (id, src, tgt, label) ... ]``."""

from __future__ import annotations

import json
import re

from ..errors import ParseError
from .labeled import LabeledGraph, Mark

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[\[\]()|,\#:])
""", re.VERBOSE)


def _label_text(label) -> str:
    return json.dumps(label) if isinstance(label, str) else str(label)


def write_host_graph(g: LabeledGraph) -> str:
    nodes = []
    for n in sorted(g.nodes.values(), key=lambda n: n.id):
        mark = " # red" if n.mark is Mark.RED else ""
        nodes.append(f"({n.id}, {_label_text(n.label)}{mark})")
    edges = [f"({e.id}, {e.src}, {e.tgt}, {_label_text(e.label)})"
             for e in sorted(g.edges.values(), key=lambda e: e.id)]
    node_part = " ".join(nodes)
    edge_part = " ".join(edges)
    return f"[ {node_part + ' ' if nodes else ''}| {edge_part + ' ' if edges else ''}]"


class _Tokens:
    def __init__(self, text: str):
        self.items: list[tuple[str, str, int, int]] = []
        line, line_start, pos = 1, 0, 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
            kind = m.lastgroup
            if kind not in ("ws", "comment"):
                self.items.append((kind, m.group(), line, m.start() - line_start + 1))
            newlines = m.group().count("\n")
            if newlines:
                line += newlines
                line_start = m.start() + m.group().rfind("\n") + 1
            pos = m.end()
        self.items.append(("eof", "", line, pos - line_start + 1))
        self.i = 0

    def peek(self):
        return self.items[self.i]

    def next(self):
        tok = self.items[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def expect(self, text: str):
        tok = self.next()
        if tok[1] != text or tok[0] == "string":
            raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2], tok[3], frozenset({repr(text)}))
        return tok

    def fail(self, expected: set[str]):
        tok = self.peek()
        raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2], tok[3], frozenset(expected))


def read_host_graph(text: str) -> LabeledGraph:
    """Parse host-graph text. Symbolic ids (``n0``) are renumbered to integers."""
    ts = _Tokens(text)
    g = LabeledGraph()
    node_ids: dict[str, int] = {}
    ts.expect("[")
    while ts.peek()[1] == "(":
        ts.next()
        key = _ident(ts)
        if key in node_ids:
            tok = ts.items[ts.i - 1]
            raise ParseError(f"duplicate node id {key}", tok[2], tok[3])
        ts.expect(",")
        label = _atom(ts)
        mark = Mark.NONE
        if ts.peek()[1] == "#":
            ts.next()
            tok = ts.next()
            if tok[1] != "red":
                raise ParseError(f"unsupported mark {tok[1]!r}", tok[2], tok[3], frozenset({"red"}))
            mark = Mark.RED
        ts.expect(")")
        node_ids[key] = g.add_node(label, mark, id=int(key) if key.lstrip("-").isdigit() and int(key) not in g.nodes else None)
    ts.expect("|")
    edge_keys: set[str] = set()
    pending = []
    while ts.peek()[1] == "(":
        ts.next()
        key = _ident(ts)
        if key in edge_keys:
            tok = ts.items[ts.i - 1]
            raise ParseError(f"duplicate edge id {key}", tok[2], tok[3])
        edge_keys.add(key)
        ts.expect(",")
        src_tok = ts.peek()
        src = _ident(ts)
        ts.expect(",")
        tgt_tok = ts.peek()
        tgt = _ident(ts)
        ts.expect(",")
        label = _atom(ts)
        ts.expect(")")
        for ref, tok in ((src, src_tok), (tgt, tgt_tok)):
            if ref not in node_ids:
                raise ParseError(f"edge refers to unknown node {ref}", tok[2], tok[3])
        pending.append((key, node_ids[src], node_ids[tgt], label))
    ts.expect("]")
    if ts.peek()[0] != "eof":
        ts.fail({"end of input"})
    for key, src, tgt, label in pending:
        numeric = key.lstrip("-").isdigit() and int(key) not in g.edges
        g.add_edge(src, tgt, label, id=int(key) if numeric else None)
    return g


def _ident(ts: _Tokens) -> str:
    tok = ts.next()
    if tok[0] not in ("int", "ident"):
        raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2], tok[3], frozenset({"identifier"}))
    return tok[1]


def _atom(ts: _Tokens):
    tok = ts.next()
    if tok[0] == "string":
        label = json.loads(tok[1])
    elif tok[0] == "int":
        label = int(tok[1])
    else:
        raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2], tok[3],
                         frozenset({"string label", "integer label"}))
    if ts.peek()[1] == ":":
        raise ParseError("list labels are not supported", ts.peek()[2], ts.peek()[3])
    return label
