"""Injective subgraph matching of rule left-hand sides into host graphs.

Matches are enumerated by backtracking along a plan computed once per rule:
start from the most selective node (a literal label, looked up through a
label index), then grow along pattern edges so that every later node is
reached through an already matched neighbour.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from ..graph.labeled import Atom, GraphEdge, LabeledGraph, Mark
from .rules import Lit, MarkPattern, PatternEdge, PatternNode, Rule, Var


@dataclass(frozen=True)
class Match:
    """A morphism from a rule's left-hand side into a host graph."""

    nodes: dict[str, int]
    edges: dict[str, int]
    assignment: dict[str, Atom]

    def key(self, rule: Rule) -> tuple:
        """Canonical ordering key: sorted node image, then images in pattern order."""
        images = tuple(self.nodes[n.id] for n in rule.lhs.nodes)
        return (tuple(sorted(images)), images, tuple(self.edges[e.id] for e in rule.lhs.edges))


def _type_ok(value: Atom, typ: str) -> bool:
    if typ == "string":
        return isinstance(value, str)
    if typ == "int":
        return isinstance(value, int) and not isinstance(value, bool)
    return True


def _mark_ok(pattern: MarkPattern, mark: Mark) -> bool:
    if pattern is MarkPattern.ANY:
        return True
    return (pattern is MarkPattern.RED) == (mark is Mark.RED)


# A plan step either places a node (via an edge from/to a placed node, or as
# a seed) or checks an edge between two already placed nodes.
@dataclass(frozen=True)
class _Seed:
    node: PatternNode


@dataclass(frozen=True)
class _Extend:
    edge: PatternEdge
    forward: bool  # True: src placed, place tgt
    node: PatternNode


@dataclass(frozen=True)
class _Check:
    edge: PatternEdge


def _selectivity(node: PatternNode) -> tuple:
    # Literal labels are looked up in an index; prefer them, and prefer
    # constrained marks.
    return (isinstance(node.label, Lit), node.mark is not MarkPattern.ANY)


@lru_cache(maxsize=None)
def _plan(rule: Rule) -> tuple:
    lhs = rule.lhs
    placed: set[str] = set()
    checked: set[str] = set()
    steps: list = []
    adjacency: dict[str, list[PatternEdge]] = {n.id: [] for n in lhs.nodes}
    for e in lhs.edges:
        adjacency[e.src].append(e)
        if e.tgt != e.src:
            adjacency[e.tgt].append(e)
    order = {n.id: i for i, n in enumerate(lhs.nodes)}

    def close_edges():
        for e in lhs.edges:
            if e.id not in checked and e.src in placed and e.tgt in placed:
                checked.add(e.id)
                steps.append(_Check(e))

    while len(placed) < len(lhs.nodes):
        remaining = [n for n in lhs.nodes if n.id not in placed]
        # prefer the most selective seed with the most connections
        seed = max(remaining, key=lambda n: (_selectivity(n), len(adjacency[n.id]), -order[n.id]))
        steps.append(_Seed(seed))
        placed.add(seed.id)
        close_edges()
        frontier = [seed.id]
        while frontier:
            nxt: list[str] = []
            for nid in frontier:
                for e in adjacency[nid]:
                    if e.id in checked:
                        continue
                    other = e.tgt if e.src == nid else e.src
                    if other in placed:
                        continue
                    steps.append(_Extend(e, e.src == nid, lhs.node(other)))
                    checked.add(e.id)
                    placed.add(other)
                    close_edges()
                    nxt.append(other)
            frontier = nxt
    return tuple(steps)


class HostIndex:
    """Label index over a host graph, built once per matching pass."""

    def __init__(self, host: LabeledGraph):
        self.host = host
        self.by_label: dict[tuple[type, Atom], list[int]] = {}
        for n in host:
            self.by_label.setdefault((type(n.label), n.label), []).append(n.id)

    def candidates(self, node: PatternNode, assignment: dict[str, Atom]) -> list[int]:
        label = node.label
        if isinstance(label, Var) and label.name in assignment:
            value = assignment[label.name]
            return self.by_label.get((type(value), value), [])
        if isinstance(label, Lit):
            return self.by_label.get((type(label.value), label.value), [])
        return sorted(self.host.nodes)


def _bind(label, value: Atom, assignment: dict[str, Atom], types: dict[str, str]) -> tuple[bool, str | None]:
    """Match a label pattern; returns (ok, newly bound variable)."""
    if isinstance(label, Lit):
        return type(label.value) is type(value) and label.value == value, None
    name = label.name
    if name in assignment:
        bound = assignment[name]
        return type(bound) is type(value) and bound == value, None
    if not _type_ok(value, types[name]):
        return False, None
    assignment[name] = value
    return True, name


def iter_matches(rule: Rule, host: LabeledGraph, index: HostIndex | None = None) -> Iterator[Match]:
    """Yield every match of ``rule`` in ``host`` (unordered)."""
    index = index or HostIndex(host)
    steps = _plan(rule)
    types = rule.param_types
    node_map: dict[str, int] = {}
    edge_map: dict[str, int] = {}
    used_nodes: set[int] = set()
    used_edges: set[int] = set()
    assignment: dict[str, Atom] = {}
    deletable = [n.id for n in rule.lhs.nodes if n.id not in rule.interface]

    def place_node(pn: PatternNode, hid: int) -> tuple[bool, str | None]:
        if hid in used_nodes:
            return False, None
        hn = host.nodes[hid]
        if not _mark_ok(pn.mark, hn.mark):
            return False, None
        return _bind(pn.label, hn.label, assignment, types)

    def edge_ok(pe: PatternEdge, he: GraphEdge) -> tuple[bool, str | None]:
        if he.id in used_edges:
            return False, None
        return _bind(pe.label, he.label, assignment, types)

    def dangling_free() -> bool:
        for pid in deletable:
            for eid in host.incident_edge_ids(node_map[pid]):
                if eid not in used_edges:
                    return False
        return True

    def search(i: int) -> Iterator[Match]:
        if i == len(steps):
            if dangling_free():
                yield Match(dict(node_map), dict(edge_map), dict(assignment))
            return
        step = steps[i]
        if isinstance(step, _Seed):
            for hid in index.candidates(step.node, assignment):
                ok, bound = place_node(step.node, hid)
                if ok:
                    node_map[step.node.id] = hid
                    used_nodes.add(hid)
                    yield from search(i + 1)
                    used_nodes.discard(hid)
                    del node_map[step.node.id]
                if bound:
                    del assignment[bound]
        elif isinstance(step, _Extend):
            pe = step.edge
            if step.forward:
                edges = host.out_edges(node_map[pe.src])
            else:
                edges = host.in_edges(node_map[pe.tgt])
            for he in edges:
                ok_e, bound_e = edge_ok(pe, he)
                if ok_e:
                    hid = he.tgt if step.forward else he.src
                    ok_n, bound_n = place_node(step.node, hid)
                    if ok_n:
                        node_map[step.node.id] = hid
                        edge_map[pe.id] = he.id
                        used_nodes.add(hid)
                        used_edges.add(he.id)
                        yield from search(i + 1)
                        used_edges.discard(he.id)
                        used_nodes.discard(hid)
                        del edge_map[pe.id]
                        del node_map[step.node.id]
                    if bound_n:
                        del assignment[bound_n]
                if bound_e:
                    del assignment[bound_e]
        else:
            pe = step.edge
            src, tgt = node_map[pe.src], node_map[pe.tgt]
            for he in host.out_edges(src):
                if he.tgt != tgt:
                    continue
                ok, bound = edge_ok(pe, he)
                if ok:
                    edge_map[pe.id] = he.id
                    used_edges.add(he.id)
                    yield from search(i + 1)
                    used_edges.discard(he.id)
                    del edge_map[pe.id]
                if bound:
                    del assignment[bound]

    yield from search(0)


def find_matches(rule: Rule, host: LabeledGraph, index: HostIndex | None = None) -> list[Match]:
    """All matches in canonical order."""
    return sorted(iter_matches(rule, host, index), key=lambda m: m.key(rule))


def first_match(rule: Rule, host: LabeledGraph, index: HostIndex | None = None) -> Match | None:
    matches = find_matches(rule, host, index)
    return matches[0] if matches else None
