"""Relation-with-counting-constraint to function-to-sets reformulation."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from ..engine import DEFAULT_FUEL, Application, RuleSet, Stuck, parse_rule_file, run
from ..errors import SpecRewriterError
from ..essence import (Find, FunctionDomain, LettingDomain, NamedDomain, Specification, check_scope)
from ..graph import decode, encode

DRIVER = "main"
TAG_STAGE = "Tag"


class NotApplicable(SpecRewriterError):
    """The tagging stage found nothing to rewrite."""

    def __init__(self, spec: Specification, position: str = ""):
        self.spec = spec
        super().__init__(f"reformulation does not apply (no match at {position})" if position
                         else "reformulation does not apply")


@dataclass(frozen=True)
class ReformulationResult:
    rewritten: Specification
    report: list[Application]
    aux_domain_name: str


def builtin_rule_files() -> list[tuple[str, str]]:
    """Shipped rule sources as (name, text), the driver program last."""
    root = resources.files(__package__) / "rules"
    files = sorted((p.name[:-len(".gp2r")], p.read_text()) for p in root.iterdir() if p.name.endswith(".gp2r"))
    return sorted(files, key=lambda f: f[0] == DRIVER)


def export_rules(directory: Path) -> list[Path]:
    """Write the shipped rule files into ``directory`` for editing."""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in builtin_rule_files():
        path = directory / f"{name}.gp2r"
        path.write_text(text)
        written.append(path)
    return written


def load_rules(extra: Iterable[str] = ()) -> RuleSet:
    """Built-in rules merged with extra rule-file texts (later wins)."""
    rules = RuleSet()
    for _, text in builtin_rule_files():
        rules = rules.merge(parse_rule_file(text))
    for text in extra:
        rules = rules.merge(parse_rule_file(text))
    rules.check()
    return rules


def _fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    i = 2
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def reformulate(spec: Specification, rules: RuleSet | None = None, fuel: int = DEFAULT_FUEL) -> ReformulationResult:
    """Rewrite a relation decision variable with a per-element counting
    constraint into a total function onto fixed-size sets.

    Raises ``NotApplicable`` (carrying the unchanged spec) when the tagging
    stage finds no match.
    """
    rules = rules or load_rules()
    trace: list[Application] = []
    try:
        graph = run("Main", rules, encode(spec), fuel=fuel, trace=trace)
    except Stuck as exc:
        if exc.position.startswith(f"Main/{TAG_STAGE}/"):
            raise NotApplicable(spec, exc.position) from None
        raise
    rewritten = decode(graph)

    tag = next((a for a in trace if a.rule == "tagCountingPattern"), None)
    aux = f"{tag.assignment['B']}Set" if tag else ""
    if tag:
        rewritten, aux = _uniquify_aux(spec, rewritten, tag.assignment["R"], aux)
    check_scope(rewritten)
    return ReformulationResult(rewritten, trace, aux)


def _uniquify_aux(original: Specification, rewritten: Specification, find_name: str,
                  aux: str) -> tuple[Specification, str]:
    taken = {d.name for d in original.declarations}
    fresh = _fresh_name(aux, taken)
    if fresh == aux:
        return rewritten, aux
    # the new letting sits where the original find was
    slot = next(i for i, d in enumerate(original.declarations) if isinstance(d, Find) and d.name == find_name)
    decls = list(rewritten.declarations)
    letting = decls[slot]
    assert isinstance(letting, LettingDomain) and letting.name == aux
    decls[slot] = LettingDomain(fresh, letting.domain)
    for i, d in enumerate(decls):
        if isinstance(d, Find) and d.name == find_name and isinstance(d.domain, FunctionDomain):
            decls[i] = Find(d.name, dataclasses.replace(d.domain, target=NamedDomain(fresh)))
    return dataclasses.replace(rewritten, declarations=tuple(decls)), fresh
