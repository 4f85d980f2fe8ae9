"""Independent reference implementations used to check the real code.

These are deliberately naive: they enumerate everything and share no
code with the matcher or the evaluator.
"""

from __future__ import annotations

import itertools

from specrewriter.engine import Lit, MarkPattern, Rule, Var
from specrewriter.graph import LabeledGraph, Mark


def _bind(pattern, value, assignment: dict, types: dict) -> bool:
    if isinstance(pattern, Lit):
        return type(pattern.value) is type(value) and pattern.value == value
    assert isinstance(pattern, Var)
    typ = types[pattern.name]
    if typ == "int" and type(value) is not int or typ == "string" and not isinstance(value, str):
        return False
    if pattern.name in assignment:
        old = assignment[pattern.name]
        return type(old) is type(value) and old == value
    assignment[pattern.name] = value
    return True


def _mark_ok(pattern: MarkPattern, mark: Mark) -> bool:
    return pattern is MarkPattern.ANY or (pattern is MarkPattern.RED) == (mark is Mark.RED)


def brute_force_matches(rule: Rule, host: LabeledGraph) -> set[tuple]:
    """Every valid match as (node images, edge images, assignment) tuples in LHS order."""
    lhs = rule.lhs
    found = set()
    host_nodes = sorted(host.nodes)
    for images in itertools.permutations(host_nodes, len(lhs.nodes)):
        node_map = dict(zip((n.id for n in lhs.nodes), images))
        base: dict = {}
        if not all(_mark_ok(pn.mark, host.nodes[node_map[pn.id]].mark)
                   and _bind(pn.label, host.nodes[node_map[pn.id]].label, base, rule.param_types)
                   for pn in lhs.nodes):
            continue
        candidates = [[e for e in host.edges.values()
                       if e.src == node_map[pe.src] and e.tgt == node_map[pe.tgt]] for pe in lhs.edges]
        for chosen in itertools.product(*candidates):
            if len({e.id for e in chosen}) != len(chosen):
                continue
            assignment = dict(base)
            if not all(_bind(pe.label, e.label, assignment, rule.param_types) for pe, e in zip(lhs.edges, chosen)):
                continue
            matched_edges = {e.id for e in chosen}
            deleted = [node_map[n.id] for n in lhs.nodes if n.id not in rule.interface]
            if any(host.incident_edge_ids(h) - matched_edges for h in deleted):
                continue
            found.add((images, tuple(e.id for e in chosen), tuple(sorted(assignment.items(), key=repr))))
    return found


def match_tuple(rule: Rule, match) -> tuple:
    return (tuple(match.nodes[n.id] for n in rule.lhs.nodes), tuple(match.edges[e.id] for e in rule.lhs.edges),
            tuple(sorted(match.assignment.items(), key=repr)))


def application_violations(rule: Rule, match, host: LabeledGraph, result: LabeledGraph) -> list[str]:
    """Check one application against the rewriting invariants; empty means fine."""
    problems = []
    # injectivity
    if len(set(match.nodes.values())) != len(match.nodes):
        problems.append("node map not injective")
    if len(set(match.edges.values())) != len(match.edges):
        problems.append("edge map not injective")
    # no dangling edges
    for e in result.edges.values():
        if e.src not in result.nodes or e.tgt not in result.nodes:
            problems.append(f"dangling edge {e}")
    # frame: everything outside the match image is untouched
    touched_nodes = set(match.nodes.values())
    touched_edges = set(match.edges.values())
    for nid, node in host.nodes.items():
        if nid not in touched_nodes and result.nodes.get(nid) != node:
            problems.append(f"untouched node {nid} changed")
    for eid, edge in host.edges.items():
        if eid not in touched_edges and result.edges.get(eid) != edge:
            problems.append(f"untouched edge {eid} changed")
    # deleted items are gone, kept ones are still there
    for pn in rule.lhs.nodes:
        present = match.nodes[pn.id] in result.nodes
        if present != (pn.id in rule.interface):
            problems.append(f"pattern node {pn.id} {'kept' if present else 'deleted'} wrongly")
    # sizes add up
    created = len(rule.rhs.nodes) - len(rule.interface)
    if len(result.nodes) != len(host.nodes) - (len(rule.lhs.nodes) - len(rule.interface)) + created:
        problems.append("node count mismatch")
    kept_edges = len(rule.preserved_edges)
    expected_edges = len(host.edges) - len(rule.lhs.edges) + len(rule.rhs.edges)
    if len(result.edges) != expected_edges or kept_edges > len(rule.lhs.edges):
        problems.append("edge count mismatch")
    return problems


def count_kfold_colourings(n: int, edges: set[tuple[int, int]], colours: int, k: int) -> int:
    """Number of ways to give each vertex exactly k of the colours with adjacent vertices disjoint."""
    choices = [frozenset(c) for c in itertools.combinations(range(1, colours + 1), k)]
    total = 0
    for assignment in itertools.product(choices, repeat=n):
        if all(not (assignment[u] & assignment[v]) for u, v in edges):
            total += 1
    return total
