"""Rule application (double-pushout style) and program execution."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import SpecRewriterError
from ..graph.labeled import Atom, LabeledGraph, Mark
from .matching import HostIndex, Match, find_matches
from .rules import (Call, Choice, Concat, LabelPattern, Lit, Loop, MarkPattern, Rule, RuleProgram, RuleSet, Seq,
                    Try, format_program)

DEFAULT_FUEL = 10_000


class Stuck(SpecRewriterError):
    """A rule or choice had no match where the program required one."""

    def __init__(self, position: str):
        self.position = position
        super().__init__(f"no match at {position}")


class FuelExhausted(SpecRewriterError):
    def __init__(self, fuel: int, position: str):
        self.fuel = fuel
        self.position = position
        super().__init__(f"fuel of {fuel} rule applications exhausted at {position}")


@dataclass(frozen=True)
class Application:
    """One rule application, recorded for reports."""

    stage: str
    rule: str
    assignment: dict[str, Atom]
    nodes: dict[str, int]


def _label(pattern: LabelPattern, assignment: dict[str, Atom]) -> Atom:
    if isinstance(pattern, Lit):
        return pattern.value
    if isinstance(pattern, Concat):
        return "".join(str(_label(p, assignment)) for p in pattern.parts)
    return assignment[pattern.name]


def apply_rule(rule: Rule, match: Match, host: LabeledGraph) -> LabeledGraph:
    """Return a rewritten copy of ``host``; the input is left untouched.

    Non-interface left-hand nodes and edges are deleted, interface nodes
    take their right-hand label and mark, and right-hand-only items are
    created with fresh ids. Edges whose id appears on both sides are kept
    (and relabelled if their label changes).
    """
    g = host.copy()
    a = match.assignment
    preserved = rule.preserved_edges
    for pe in rule.lhs.edges:
        if pe.id not in preserved:
            g.remove_edge(match.edges[pe.id])
    for pn in rule.lhs.nodes:
        if pn.id not in rule.interface:
            g.remove_node(match.nodes[pn.id])
    image: dict[str, int] = {}
    for rn in rule.rhs.nodes:
        mark = Mark.RED if rn.mark is MarkPattern.RED else Mark.NONE
        label = _label(rn.label, a)
        if rn.id in rule.interface:
            hid = match.nodes[rn.id]
            if g.nodes[hid].label != label or g.nodes[hid].mark is not mark:
                g.relabel(hid, label, mark)
            image[rn.id] = hid
        else:
            image[rn.id] = g.add_node(label, mark)
    for re_ in rule.rhs.edges:
        label = _label(re_.label, a)
        if re_.id in preserved:
            hid = match.edges[re_.id]
            if g.edges[hid].label != label:
                old = g.edges[hid]
                g.remove_edge(hid)
                g.add_edge(old.src, old.tgt, label, id=hid)
        else:
            g.add_edge(image[re_.src], image[re_.tgt], label)
    return g


@dataclass
class _Run:
    rules: RuleSet
    fuel: int
    trace: list[Application] | None
    used: int = 0
    stack: list[str] = field(default_factory=list)

    def position(self, name: str) -> str:
        return "/".join([*self.stack, name])

    def apply_first(self, names: tuple[str, ...], g: LabeledGraph) -> LabeledGraph:
        index = HostIndex(g)
        for name in names:
            rule = self.rules.rules[name]
            matches = find_matches(rule, g, index)
            if matches:
                if self.used >= self.fuel:
                    raise FuelExhausted(self.fuel, self.position(name))
                self.used += 1
                m = matches[0]
                if self.trace is not None:
                    stage = self.stack[-1] if self.stack else ""
                    self.trace.append(Application(stage, name, m.assignment, m.nodes))
                return apply_rule(rule, m, g)
        label = names[0] if len(names) == 1 else "{" + ", ".join(names) + "}"
        raise Stuck(self.position(label))

    def exec(self, p: RuleProgram, g: LabeledGraph) -> LabeledGraph:
        match p:
            case Call(name):
                if name in self.rules.rules:
                    return self.apply_first((name,), g)
                if name in self.rules.procedures:
                    self.stack.append(name)
                    try:
                        return self.exec(self.rules.procedures[name], g)
                    finally:
                        self.stack.pop()
                raise Stuck(self.position(name))
            case Choice(names):
                return self.apply_first(names, g)
            case Seq(items):
                for item in items:
                    g = self.exec(item, g)
                return g
            case Loop(body):
                while True:
                    before = self.used
                    try:
                        nxt = self.exec(body, g)
                    except Stuck:
                        return g
                    if self.used == before:
                        # the body succeeded without rewriting: a fixpoint
                        return nxt
                    g = nxt
            case Try(body):
                try:
                    return self.exec(body, g)
                except Stuck:
                    return g
        raise TypeError(f"not a program: {p!r}")


def run(program: RuleProgram | str, rules: RuleSet, host: LabeledGraph, fuel: int = DEFAULT_FUEL,
        trace: list[Application] | None = None) -> LabeledGraph:
    """Execute ``program`` (or the named procedure) on ``host``.

    Each rule call rewrites at its first match in canonical order. Raises
    ``Stuck`` when a required rule has no match and ``FuelExhausted`` once
    more than ``fuel`` applications would be needed. Pass a list as
    ``trace`` to collect the applications performed.
    """
    if isinstance(program, str):
        program = Call(program)
    rules.check()
    return _Run(rules, fuel, trace).exec(program, host)


__all__ = ["Application", "DEFAULT_FUEL", "FuelExhausted", "Stuck", "apply_rule", "format_program", "run"]
